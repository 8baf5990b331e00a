//! Algebras selected by name, as on the command line.

use std::path::Path;

use num_rational::BigRational;

use super::{
    enlarge, make_bounded_q, make_int_direct_division, make_int_inverse_division, make_rational_cm,
    make_three_level_lattice, make_zn_inverse_division, parse_rational, AlgebraError, PartialAlgebra, TableAlgebra,
    TableError, TotalAlgebra, SHIPPED_TABLES, ZnRing,
};

/// `(pattern, description)` for every accepted name, in listing order.
pub const ALGEBRA_NAMES: &[(&str, &str)] = &[
    ("zn:<n>", "Z_n with inverse-based division, 1/0 = bot"),
    ("int-inv", "integers with inverse-based division, enlarged by bot"),
    ("int-direct", "integers with direct division, enlarged by bot"),
    ("rat-cm", "the common meadow of rationals"),
    ("bounded-q:<b>", "rationals in (-b, b), undefined outside, enlarged by bot"),
    ("lattice3", "three-level generalised common meadow over Q"),
    ("<table>", "a shipped finite table (two-level, three-level, z6-split)"),
    ("<file.json>", "a finite table loaded from a JSON file"),
];

#[derive(Debug, thiserror::Error)]
pub enum NamedError {
    #[error("unknown algebra {0:?}, see `models`")]
    Unknown(String),
    #[error("bad modulus in {0:?}")]
    BadModulus(String),
    #[error("bad bound in {0:?}")]
    BadBound(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Something to do with a total algebra of any element type.
pub trait TotalVisitor {
    type Out;
    fn visit<A: TotalAlgebra>(self, alg: &A) -> Self::Out;
}

/// Something to do with a partial algebra of any element type.
pub trait PartialVisitor {
    type Out;
    fn visit<P: PartialAlgebra + Clone>(self, alg: &P) -> Self::Out;
}

#[derive(Clone, Debug)]
pub enum Named {
    Zn(u64),
    IntInv,
    IntDirect,
    RatCm,
    BoundedQ(BigRational),
    Lattice3,
    Table(TableAlgebra),
}

impl Named {
    pub fn resolve(name: &str) -> Result<Named, NamedError> {
        let name = name.trim();
        if let Some(n) = name.strip_prefix("zn:") {
            let n = n.parse().map_err(|_| NamedError::BadModulus(name.into()))?;
            ZnRing::new(n)?;
            return Ok(Named::Zn(n));
        }
        if let Some(b) = name.strip_prefix("bounded-q:") {
            let b = parse_rational(b).ok_or_else(|| NamedError::BadBound(name.into()))?;
            make_bounded_q(b.clone())?;
            return Ok(Named::BoundedQ(b));
        }
        Ok(match name {
            "int-inv" => Named::IntInv,
            "int-direct" => Named::IntDirect,
            "rat-cm" => Named::RatCm,
            "lattice3" => Named::Lattice3,
            _ if SHIPPED_TABLES.contains(&name) => Named::Table(TableAlgebra::shipped(name).expect("shipped table")),
            _ if name.ends_with(".json") || Path::new(name).is_file() => Named::Table(TableAlgebra::load(name)?),
            _ => return Err(NamedError::Unknown(name.into())),
        })
    }

    /// Runs `v` on the total algebra: the enlargement for partial ones.
    pub fn visit<V: TotalVisitor>(&self, v: V) -> V::Out {
        match self {
            Named::Zn(n) => v.visit(&make_zn_inverse_division(*n).expect("checked in resolve")),
            Named::IntInv => v.visit(&enlarge(make_int_inverse_division()).expect("infinite")),
            Named::IntDirect => v.visit(&enlarge(make_int_direct_division()).expect("infinite")),
            Named::RatCm => v.visit(&make_rational_cm()),
            Named::BoundedQ(b) => {
                v.visit(&enlarge(make_bounded_q(b.clone()).expect("checked in resolve")).expect("infinite"))
            }
            Named::Lattice3 => v.visit(&make_three_level_lattice()),
            Named::Table(t) => v.visit(t),
        }
    }

    /// Runs `v` on the partial algebra behind the name, if there is one.
    pub fn visit_partial<V: PartialVisitor>(&self, v: V) -> Option<V::Out> {
        Some(match self {
            Named::Zn(n) => v.visit(&ZnRing::new(*n).expect("checked in resolve")),
            Named::IntInv => v.visit(&make_int_inverse_division()),
            Named::IntDirect => v.visit(&make_int_direct_division()),
            Named::RatCm => v.visit(make_rational_cm().inner()),
            Named::BoundedQ(b) => v.visit(&make_bounded_q(b.clone()).expect("checked in resolve")),
            Named::Lattice3 | Named::Table(_) => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Size;

    impl TotalVisitor for Size {
        type Out = Option<usize>;
        fn visit<A: TotalAlgebra>(self, alg: &A) -> Option<usize> {
            alg.elements().map(|e| e.len())
        }
    }

    #[test]
    fn names_resolve() {
        assert_eq!(Named::resolve("zn:10").unwrap().visit(Size), Some(11));
        assert_eq!(Named::resolve("two-level").unwrap().visit(Size), Some(5));
        assert_eq!(Named::resolve("rat-cm").unwrap().visit(Size), None);
        assert!(Named::resolve("bounded-q:9.5").is_ok());
        assert!(matches!(Named::resolve("zn:1"), Err(NamedError::Algebra(_))));
        assert!(matches!(Named::resolve("zn:x"), Err(NamedError::BadModulus(_))));
        assert!(matches!(Named::resolve("field"), Err(NamedError::Unknown(_))));
    }
}
