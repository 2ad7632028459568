mod common;

use twoblock::embed::cases::Frame;
use twoblock::embed::{tail_into_x_case, validate_trace, CaseIiOutcome, CaseLabel};
use twoblock::path::{concat_reverse, extract_two_block, verify_embedding, HostPath, TwoBlockSpec};
use twoblock::search::SearchBudget;

#[test]
fn each_case_ii_branch_fires_on_its_fixture() {
    for fx in common::case_ii_fixtures() {
        let (label, trace, extension) = fx.run();
        assert_eq!(label, fx.expected);
        assert_eq!(validate_trace(&fx.g, &trace), Ok(()), "{label}");
        match extension {
            None => {
                // the split really carries the two-block path
                let walk = concat_reverse(
                    &HostPath::new(trace.p1.clone()).unwrap(),
                    &HostPath::new(trace.p2.clone()).unwrap(),
                )
                .unwrap();
                let e = extract_two_block(&walk, TwoBlockSpec::back_first(fx.k, fx.ell).unwrap())
                    .unwrap();
                assert_eq!(verify_embedding(&fx.g, &e.pattern, &e.vertices), Ok(()));
            }
            Some(longer) => {
                let p = HostPath::new(longer).unwrap();
                assert!(p.is_directed_in(&fx.g));
                assert!(p.length() > fx.path.len() - 1);
            }
        }
    }
}

#[test]
fn short_fixture_witnesses() {
    let fx = common::short_pprime();
    let (_, trace, _) = fx.run();
    assert_eq!(trace.witnesses.m, Some(2));
    assert_eq!(trace.witnesses.j, Some(0));
    assert_eq!(trace.witnesses.p_prime.as_deref(), Some(&[9, 10, 11][..]));
    assert_eq!(trace.p1, vec![2, 9, 10, 11, 0, 1]);
}

#[test]
fn guard_is_a_violation_on_certified_paths() {
    let fx = common::extension_guard();
    let frame = Frame::new(&fx.g, fx.path.clone(), fx.k, fx.ell, true);
    assert!(tail_into_x_case(&frame, fx.i, &SearchBudget::default()).is_err());
    let frame = Frame::new(&fx.g, fx.path.clone(), fx.k, fx.ell, false);
    assert!(matches!(
        tail_into_x_case(&frame, fx.i, &SearchBudget::default()),
        Ok(Some(CaseIiOutcome::Extension { .. }))
    ));
}

#[test]
fn case_ii_rejects_bad_pivot() {
    let fx = common::long_pprime();
    let frame = Frame::new(&fx.g, fx.path.clone(), fx.k, fx.ell, false);
    // v_2 lies outside X for k - ell = 2
    assert!(tail_into_x_case(&frame, 2, &SearchBudget::default()).is_err());
    assert_eq!(CaseLabel::ALL.len(), 11);
}
