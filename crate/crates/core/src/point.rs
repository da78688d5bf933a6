//! Points of the projective plane with exact coordinates.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A point `[X:Y:Z]`, scaled so the last nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [Rational; 3],
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coords;
        write!(f, "[{a}:{b}:{c}]")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl ProjPoint {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Result<Self> {
        let mut coords = [x, y, z];
        let Some(idx) = coords.iter().rposition(|c| !c.is_zero()) else {
            return Err(Error::Invalid("all coordinates are zero".into()));
        };
        if !coords[idx].is_one() {
            let inv = coords[idx].recip();
            for c in coords.iter_mut() {
                *c *= &inv;
            }
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_array(c: [Rational; 3]) -> Result<Self> {
        let [a, b, d] = c;
        ProjPoint::new(a, b, d)
    }

    /// The affine point `(x, y)` in the chart `Z = 1`.
    pub fn affine(x: Rational, y: Rational) -> Self {
        ProjPoint { coords: [x, y, Rational::one()] }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Result<Self> {
        ProjPoint::new(rational::int(x), rational::int(y), rational::int(z))
    }

    pub fn coords(&self) -> &[Rational; 3] {
        &self.coords
    }

    pub fn is_affine(&self) -> bool {
        !self.coords[2].is_zero()
    }

    pub fn affine_coords(&self) -> Option<(Rational, Rational)> {
        self.is_affine().then(|| (self.coords[0].clone(), self.coords[1].clone()))
    }

    /// Index of the coordinate of largest absolute value (last one on ties).
    pub fn dominant_index(&self) -> usize {
        let mut best = 2;
        for i in (0..3).rev() {
            if self.coords[i].abs() > self.coords[best].abs() {
                best = i;
            }
        }
        best
    }

    /// Coordinates rescaled so the given coordinate equals 1.
    pub fn scaled_to(&self, idx: usize) -> [Rational; 3] {
        let inv = self.coords[idx].recip();
        [&self.coords[0] * &inv, &self.coords[1] * &inv, &self.coords[2] * &inv]
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [rational::to_f64(&self.coords[0]), rational::to_f64(&self.coords[1]), rational::to_f64(&self.coords[2])]
    }

    pub fn to_strings(&self) -> [String; 3] {
        [rational::format(&self.coords[0]), rational::format(&self.coords[1]), rational::format(&self.coords[2])]
    }
}

/// Determinant of the three coordinate vectors; zero iff the points are collinear.
pub fn collinearity_det(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Rational {
    let [a0, a1, a2] = a.coords();
    let [b0, b1, b2] = b.coords();
    let [c0, c1, c2] = c.coords();
    a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0)
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <[String; 3]>::deserialize(d)?;
        let mut c = Vec::with_capacity(3);
        for s in &raw {
            c.push(rational::parse(s).map_err(serde::de::Error::custom)?);
        }
        let z = c.pop().unwrap();
        let y = c.pop().unwrap();
        let x = c.pop().unwrap();
        ProjPoint::new(x, y, z).map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn normalization_is_canonical() {
        let a = ProjPoint::new(int(2), int(4), int(2)).unwrap();
        let b = ProjPoint::new(rat(1, 3), rat(2, 3), rat(1, 3)).unwrap();
        assert_eq!(a, b);
        let inf = ProjPoint::new(int(3), int(-6), int(0)).unwrap();
        assert_eq!(inf.coords(), &[rat(-1, 2), int(1), int(0)]);
        assert!(ProjPoint::new(int(0), int(0), int(0)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = ProjPoint::new(rat(1, 2), int(-3), int(1)).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["1/2","-3","1"]"#);
        let q: ProjPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}
