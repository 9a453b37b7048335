//! Instruction-granular page-access simulation for toy programs. It shows
//! why instruction counting matters: two secrets can touch the same page
//! *sequence* yet place an access at different instruction offsets.

/// Page label, e.g. "P0" or "S".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Page(pub String);

impl Page {
    pub fn new(name: &str) -> Page {
        Page(name.to_string())
    }
}

#[derive(Debug, Clone)]
pub enum ToyStep {
    /// One instruction fetched from `code`.
    Instr { code: Page },
    /// One instruction fetched from `code` that also touches `data`.
    MemInstr { code: Page, data: Page },
    /// Branch on one secret bit.
    IfElse { bit: u32, then_branch: Vec<ToyStep>, else_branch: Vec<ToyStep> },
    /// Multi-way branch on `width` secret bits starting at `base_bit`.
    Switch { base_bit: u32, width: u32, cases: Vec<Vec<ToyStep>> },
}

#[derive(Debug, Clone, Default)]
pub struct ToyProgram {
    pub steps: Vec<ToyStep>,
}

/// Execute the program on `secret` and return the page touched by every
/// instruction (data pages interleaved at their access position).
pub fn simulate_page_trace(program: &ToyProgram, secret: u64) -> Vec<Page> {
    let mut accesses = Vec::new();
    run(&program.steps, secret, &mut accesses);
    accesses
}

fn run(steps: &[ToyStep], secret: u64, out: &mut Vec<Page>) {
    for step in steps {
        match step {
            ToyStep::Instr { code } => out.push(code.clone()),
            ToyStep::MemInstr { code, data } => {
                out.push(code.clone());
                out.push(data.clone());
            }
            ToyStep::IfElse { bit, then_branch, else_branch } => {
                if secret >> bit & 1 == 1 {
                    run(then_branch, secret, out);
                } else {
                    run(else_branch, secret, out);
                }
            }
            ToyStep::Switch { base_bit, width, cases } => {
                let sel = (secret >> base_bit) as usize & ((1 << width) - 1);
                run(&cases[sel.min(cases.len() - 1)], secret, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> Page {
        Page::new(name)
    }

    #[test]
    fn balanced_if_else_still_distinguishable() {
        // Both branches call out to P1 through the stack page S; they differ
        // by a single instruction on P0.
        let program = ToyProgram {
            steps: vec![
                ToyStep::Instr { code: p("P0") },
                ToyStep::IfElse {
                    bit: 0,
                    then_branch: vec![
                        ToyStep::Instr { code: p("P0") },
                        ToyStep::MemInstr { code: p("P0"), data: p("S") },
                    ],
                    else_branch: vec![ToyStep::MemInstr { code: p("P0"), data: p("S") }],
                },
                ToyStep::Instr { code: p("P1") },
            ],
        };
        let taken = simulate_page_trace(&program, 1);
        let skipped = simulate_page_trace(&program, 0);
        assert_eq!(taken, [p("P0"), p("P0"), p("P0"), p("S"), p("P1")]);
        assert_eq!(skipped, [p("P0"), p("P0"), p("S"), p("P1")]);
        // Same page *set* and order, different instruction offsets.
        assert_ne!(taken, skipped);
    }

    #[test]
    fn switch_cases_leak_through_data_access_offset() {
        // Four equal-length cases on one page; the data access sits at a
        // case-dependent offset.
        let case = |prefix: usize| {
            let mut steps: Vec<ToyStep> = (0..prefix).map(|_| ToyStep::Instr { code: p("P0") }).collect();
            steps.push(ToyStep::MemInstr { code: p("P0"), data: p("D") });
            steps.extend((prefix + 1..4).map(|_| ToyStep::Instr { code: p("P0") }));
            steps
        };
        let program = ToyProgram {
            steps: vec![ToyStep::Switch {
                base_bit: 0,
                width: 2,
                cases: (0..4).map(case).collect(),
            }],
        };
        let traces: Vec<_> = (0..4).map(|s| simulate_page_trace(&program, s)).collect();
        for t in &traces {
            assert_eq!(t.len(), 5); // same length, same page set
        }
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(traces[i], traces[j], "cases {i} and {j} collide");
            }
        }
    }

    #[test]
    fn straight_line_code_is_secret_independent() {
        let program = ToyProgram {
            steps: vec![
                ToyStep::Instr { code: p("P0") },
                ToyStep::MemInstr { code: p("P0"), data: p("S") },
                ToyStep::Instr { code: p("P0") },
            ],
        };
        let a = simulate_page_trace(&program, 0);
        let b = simulate_page_trace(&program, u64::MAX);
        assert_eq!(a, b);
    }
}
