//! Pipeline invariants on generated well-typed programs.

mod common;

use arrc::ainf::{parse_ainf, read_tsv, validate, write_tsv};
use arrc::eval::gen_program;
use arrc::lower::to_ainf;
use arrc::nbe::normalize;
use arrc::pipeline::{optimize, Options};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn every_stage_agrees_with_the_reference(seed in any::<u64>(), depth in 1u32..=5) {
        if let Err(e) = common::audit(seed, depth, &Options::default()) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn stages_agree_without_folding(seed in any::<u64>(), depth in 1u32..=5) {
        let opts = Options { fold: false, identities: false, ..Options::default() };
        if let Err(e) = common::audit(seed, depth, &opts) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn listings_read_back(seed in any::<u64>(), depth in 1u32..=5) {
        let g = gen_program(seed, depth);
        let lowered = to_ainf("gen", &g.params, &normalize(&g.body));
        let (stages, _) = optimize(lowered, &Options::default());
        for s in &stages {
            let text = s.program.to_string();
            let back = parse_ainf(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
            prop_assert_eq!(&back, &s.program);
            prop_assert_eq!(validate(&back), Ok(()));
            prop_assert_eq!(&read_tsv(&write_tsv(&s.program)).unwrap(), &s.program);
        }
    }
}
