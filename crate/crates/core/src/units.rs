//! Decibel conversions. Everything inside the simulator is linear; these are
//! only used where values enter or leave.

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    linear_to_db(watts) + 30.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dbm_reference_points() {
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(10.0) - 0.01).abs() < 1e-15);
        assert!((dbm_to_watts(-100.0) - 1e-13).abs() < 1e-25);
        assert!((watts_to_dbm(0.1) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn db_round_trip() {
        for db in [-87.0, -3.0, 0.0, 12.5, 110.0] {
            assert!((linear_to_db(db_to_linear(db)) - db).abs() < 1e-9);
        }
    }
}
