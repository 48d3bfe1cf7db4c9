use qorbit_bench::{disc_points, sample_params};

#[test]
fn grid_has_500_points() {
    assert_eq!(sample_params().len(), 500);
}

#[test]
fn points_stay_in_disc() {
    assert!(disc_points(25).iter().all(|z| z.norm() < 1.0));
}
