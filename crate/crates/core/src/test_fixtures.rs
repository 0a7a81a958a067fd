//! Tiny curves shared by the unit tests.

use crate::geometry::{Curve, Point};

/// Four collinear points on the x-axis.
pub fn curve_l() -> Curve {
    Curve::new(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(2.0, 0.0),
        Point::new(3.0, 0.0),
    ])
    .unwrap()
}

/// A five-vertex zigzag alternating between y = 0 and y = 1.
pub fn curve_z() -> Curve {
    Curve::new(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(2.0, 0.0),
        Point::new(3.0, 1.0),
        Point::new(4.0, 0.0),
    ])
    .unwrap()
}
