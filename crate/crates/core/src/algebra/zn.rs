use std::collections::BTreeSet;

use num_integer::Integer;
use rand::Rng;
use serde_json::Value;

use super::{enlarge, AlgebraError, Enlarged, PartialAlgebra, Prng};

/// `Z/nZ` with `a/b = a * b^-1`, undefined when `b` is not a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZnRing {
    n: u64,
}

/// The largest accepted modulus; products of residues fit in `u128` with
/// room to spare, this only keeps enumeration sane.
const MAX_MODULUS: u64 = 1 << 32;

impl ZnRing {
    pub fn new(n: u64) -> Result<ZnRing, AlgebraError> {
        if !(2..=MAX_MODULUS).contains(&n) {
            return Err(AlgebraError::BadModulus(n));
        }
        Ok(ZnRing { n })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        let g = (a as i128).extended_gcd(&(self.n as i128));
        (g.gcd == 1).then(|| g.x.rem_euclid(self.n as i128) as u64)
    }

    pub fn units(&self) -> Vec<u64> {
        (1..self.n).filter(|a| a.gcd(&self.n) == 1).collect()
    }

    fn reduce(&self, a: i128) -> u64 {
        a.rem_euclid(self.n as i128) as u64
    }
}

impl PartialAlgebra for ZnRing {
    type Elem = u64;

    fn name(&self) -> String {
        format!("zn:{}", self.n)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.n
    }

    fn add(&self, a: &u64, b: &u64) -> Option<u64> {
        Some(self.reduce(*a as i128 + *b as i128))
    }

    fn neg(&self, a: &u64) -> Option<u64> {
        Some(self.reduce(-(*a as i128)))
    }

    fn mul(&self, a: &u64, b: &u64) -> Option<u64> {
        Some(((*a as u128 * *b as u128) % self.n as u128) as u64)
    }

    fn div(&self, a: &u64, b: &u64) -> Option<u64> {
        self.inverse(*b).and_then(|inv| self.mul(a, &inv))
    }

    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.n).collect())
    }

    fn sample(&self, rng: &mut Prng) -> u64 {
        rng.gen_range(0..self.n)
    }

    fn encode(&self, e: &u64) -> Value {
        Value::from(*e)
    }

    /// Any integer is accepted and reduced, so `-1` names `n - 1`.
    fn decode(&self, s: &str) -> Result<u64, AlgebraError> {
        s.trim().parse::<i128>().map(|a| self.reduce(a)).map_err(|_| AlgebraError::BadElement {
            algebra: self.name(),
            input: s.to_string(),
        })
    }
}

/// `Enl(Z/nZ)` with inverse-based division.
pub type Zn = Enlarged<ZnRing>;

pub fn make_zn_inverse_division(n: u64) -> Result<Zn, AlgebraError> {
    enlarge(ZnRing::new(n)?)
}

/// Every `c` in `Z/nZ` with `c * b = a`. Empty means direct division is
/// undefined; more than one element means it is not a function at `(a, b)`.
pub fn direct_division_solutions(n: u64, a: u64, b: u64) -> Result<BTreeSet<u64>, AlgebraError> {
    let r = ZnRing::new(n)?;
    let (a, b) = (a % n, b % n);
    // c*b = a (mod n) is solvable iff g = gcd(b, n) divides a; the solutions
    // form one residue class modulo n/g
    let g = b.gcd(&n);
    if a % g != 0 {
        return Ok(BTreeSet::new());
    }
    let m = n / g;
    let base = if m == 1 {
        0
    } else {
        let sub = ZnRing::new(m)?;
        let inv = sub.inverse((b / g) % m).expect("b/g is a unit modulo n/g");
        sub.mul(&((a / g) % m), &inv).expect("total")
    };
    Ok((0..g).map(|k| r.reduce(base as i128 + (k as i128) * (m as i128))).collect())
}
