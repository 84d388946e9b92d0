//! Pointwise Banach-lattice operations on collocation values.

use crate::field::PhysicalVectorField;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticePart {
    /// `f ∨ 0`
    Pos,
    /// `(-f) ∨ 0`
    Neg,
    /// `f ∨ (-f)`
    Abs,
}

pub fn lattice_part(u: &PhysicalVectorField, which: LatticePart) -> PhysicalVectorField {
    match which {
        LatticePart::Pos => u.map(|v| v.max(0.0)),
        LatticePart::Neg => u.map(|v| (-v).max(0.0)),
        LatticePart::Abs => u.map(f64::abs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusGrid;
    use proptest::prelude::*;

    #[test]
    fn constant_field_parts() {
        let g = TorusGrid::standard(3, 8).unwrap();
        let u = PhysicalVectorField::from_fn(&g, |_| [-1.0, 2.0, 0.0]);
        let pos = lattice_part(&u, LatticePart::Pos);
        let neg = lattice_part(&u, LatticePart::Neg);
        assert!(pos.components()[0].iter().all(|&v| v == 0.0));
        assert!(pos.components()[1].iter().all(|&v| v == 2.0));
        assert!(neg.components()[0].iter().all(|&v| v == 1.0));
        assert!(neg.components()[1].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn nonnegative_field_is_its_own_positive_part() {
        let g = TorusGrid::standard(2, 8).unwrap();
        let u = PhysicalVectorField::from_fn(&g, |x| [x[0].sin().abs(), 1.0 + x[1].cos(), 0.0]);
        assert_eq!(lattice_part(&u, LatticePart::Pos), u);
        assert_eq!(lattice_part(&u, LatticePart::Neg).max_abs(), 0.0);
    }

    proptest! {
        #[test]
        fn decomposition_is_exact(vals in prop::collection::vec(-1e6f64..1e6, 128)) {
            let g = TorusGrid::standard(2, 8).unwrap();
            let u = PhysicalVectorField::new(g, vec![vals[..64].to_vec(), vals[64..].to_vec()]).unwrap();
            let pos = lattice_part(&u, LatticePart::Pos);
            let neg = lattice_part(&u, LatticePart::Neg);
            let abs = lattice_part(&u, LatticePart::Abs);
            for i in 0..2 {
                for j in 0..64 {
                    prop_assert_eq!(pos.components()[i][j] - neg.components()[i][j], u.components()[i][j]);
                    prop_assert_eq!(pos.components()[i][j] + neg.components()[i][j], abs.components()[i][j]);
                }
            }
        }
    }
}
