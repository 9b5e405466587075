//! Points of the parameter plane and the Manhattan metric on them.

/// A point `(x, y)` of the parameter plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }
}

/// `|a.x - b.x| + |a.y - b.y|`
pub fn manhattan_distance(a: Point2, b: Point2) -> f64 {
    libm::fabs(a.x - b.x) + libm::fabs(a.y - b.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let d = manhattan_distance(Point2::new(0.0, 0.0), Point2::new(0.1, 0.1));
        assert!((d - 0.2).abs() < 1e-15);
        assert_eq!(manhattan_distance(Point2::new(1.0, 2.0), Point2::new(1.0, 2.0)), 0.0);
        let d = manhattan_distance(Point2::new(0.3, 0.5), Point2::new(0.7, 0.4));
        assert!((d - 0.5).abs() < 1e-15);
    }

    fn point() -> impl Strategy<Value = Point2> {
        (-1e3f64..1e3, -1e3f64..1e3).prop_map(|(x, y)| Point2::new(x, y))
    }

    proptest! {
        #[test]
        fn metric_axioms(a in point(), b in point(), c in point()) {
            let ab = manhattan_distance(a, b);
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(ab, manhattan_distance(b, a));
            prop_assert_eq!(manhattan_distance(a, a), 0.0);
            prop_assert_eq!(ab == 0.0, a == b);
            let slack = 1e-12 * (1.0 + ab);
            prop_assert!(manhattan_distance(a, c) <= ab + manhattan_distance(b, c) + slack);
        }
    }
}
