mod common;

#[test]
fn exact_and_bounded_agree_on_fresh_seed() {
    let (yes, no) = common::oracle_campaign(17, 200).unwrap();
    eprintln!("equal {yes}, different {no}");
    assert!(yes > 0 && no > 0);
}
