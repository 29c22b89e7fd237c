mod common;

#[test]
fn counts_match_grid_classes() {
    common::region_grid_oracle(2, 3).unwrap();
}

#[test]
fn round_trips_on_random_valuations() {
    common::region_round_trips(7, 10_000).unwrap();
}

#[test]
fn lcm_faults_flip_acceptance() {
    assert_eq!(common::lcm_fault_matrix().unwrap(), 15);
}
