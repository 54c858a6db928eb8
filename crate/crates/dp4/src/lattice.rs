//! Picard lattices of del Pezzo surfaces of degree 1..=8, with exact
//! integer arithmetic throughout.
//!
//! A lattice of degree d has rank 10-d with basis e0, e1, ..., e_{9-d} and
//! intersection form diag(+1, -1, ..., -1); the canonical class is
//! K = -3 e0 + e1 + ... + e_{9-d}.  Lines are the classes D with
//! D.D = D.K = -1.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("degree {0} out of range 1..=8")]
    DegreeOutOfRange(u8),
    #[error("coordinate vector has length {got}, lattice of degree {degree} has rank {want}")]
    WrongLength { degree: u8, want: usize, got: usize },
    #[error("lattice tag mismatch: {0} vs {1}")]
    TagMismatch(LatticeTag, LatticeTag),
    #[error("line enumeration supports degrees 1..=4, got {0}")]
    UnsupportedDegree(u8),
    #[error("expected adjacent degrees, got {0} -> {1}")]
    NonAdjacentDegrees(u8, u8),
    #[error("operation requires the {0} lattice, got {1}")]
    WrongLattice(LatticeTag, LatticeTag),
    #[error("class {0} is not a line")]
    NotALine(String),
    #[error("cannot parse {0:?} as a lattice tag")]
    ParseTag(String),
}

/// Identifies the ambient lattice by the degree of the surface.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeTag {
    degree: u8,
}

impl LatticeTag {
    pub const DP4: LatticeTag = LatticeTag { degree: 4 };
    pub const DP3: LatticeTag = LatticeTag { degree: 3 };
    pub const DP2: LatticeTag = LatticeTag { degree: 2 };
    pub const DP1: LatticeTag = LatticeTag { degree: 1 };

    pub fn new(degree: u8) -> Result<Self, LatticeError> {
        if (1..=8).contains(&degree) {
            Ok(LatticeTag { degree })
        } else {
            Err(LatticeError::DegreeOutOfRange(degree))
        }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn rank(&self) -> usize {
        (10 - self.degree) as usize
    }
}

impl fmt::Display for LatticeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dp{}", self.degree)
    }
}

impl fmt::Debug for LatticeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dp{}", self.degree)
    }
}

impl FromStr for LatticeTag {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let d = s
            .strip_prefix("dp")
            .and_then(|d| d.parse::<u8>().ok())
            .ok_or_else(|| LatticeError::ParseTag(s.to_string()))?;
        LatticeTag::new(d)
    }
}

impl serde::Serialize for LatticeTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for LatticeTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A divisor class, written in the e0, e1, ... basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PicClass {
    tag: LatticeTag,
    coords: Vec<i64>,
}

impl PicClass {
    pub fn new(tag: LatticeTag, coords: Vec<i64>) -> Result<Self, LatticeError> {
        if coords.len() != tag.rank() {
            return Err(LatticeError::WrongLength {
                degree: tag.degree(),
                want: tag.rank(),
                got: coords.len(),
            });
        }
        Ok(PicClass { tag, coords })
    }

    pub fn zero(tag: LatticeTag) -> Self {
        PicClass {
            tag,
            coords: vec![0; tag.rank()],
        }
    }

    /// Basis vector e_i, 0-based (e0 is the hyperplane-type class).
    pub fn basis(tag: LatticeTag, i: usize) -> Result<Self, LatticeError> {
        if i >= tag.rank() {
            return Err(LatticeError::WrongLength {
                degree: tag.degree(),
                want: tag.rank(),
                got: i,
            });
        }
        let mut coords = vec![0; tag.rank()];
        coords[i] = 1;
        Ok(PicClass { tag, coords })
    }

    pub fn canonical(tag: LatticeTag) -> Self {
        let mut coords = vec![1; tag.rank()];
        coords[0] = -3;
        PicClass { tag, coords }
    }

    pub fn anticanonical(tag: LatticeTag) -> Self {
        Self::canonical(tag).neg()
    }

    pub fn tag(&self) -> LatticeTag {
        self.tag
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn add(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.tag != other.tag {
            return Err(LatticeError::TagMismatch(self.tag, other.tag));
        }
        Ok(PicClass {
            tag: self.tag,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PicClass {
            tag: self.tag,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: i64) -> Self {
        PicClass {
            tag: self.tag,
            coords: self.coords.iter().map(|a| s * a).collect(),
        }
    }

    pub fn self_intersection(&self) -> i64 {
        intersect(self, self).expect("same lattice")
    }

    pub fn is_line(&self) -> bool {
        self.self_intersection() == -1
            && intersect(self, &PicClass::canonical(self.tag)).unwrap() == -1
    }
}

impl fmt::Display for PicClass {
    /// Bracketed coordinate list, e.g. `[2,-1,-1,-1,-1,-1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.tag, self)
    }
}

/// Intersection pairing: diag(+1, -1, ..., -1).
pub fn intersect(a: &PicClass, b: &PicClass) -> Result<i64, LatticeError> {
    if a.tag != b.tag {
        return Err(LatticeError::TagMismatch(a.tag, b.tag));
    }
    let mut s = a.coords[0] * b.coords[0];
    for i in 1..a.coords.len() {
        s -= a.coords[i] * b.coords[i];
    }
    Ok(s)
}

/// All lines (classes with D.D = D.K = -1) of the degree-1..=4 lattices,
/// sorted lexicographically by coordinates.  Found by bounded integer search:
/// writing D = a0 e0 + sum a_i e_i, the two conditions pin
/// sum a_i = 1 - 3 a0 and sum a_i^2 = a0^2 + 1, which bounds every
/// coordinate.
pub fn enumerate_lines(tag: LatticeTag) -> Result<Vec<PicClass>, LatticeError> {
    if !(1..=4).contains(&tag.degree()) {
        return Err(LatticeError::UnsupportedDegree(tag.degree()));
    }
    let n = tag.rank() - 1; // number of exceptional coordinates
    let mut out = Vec::new();
    for a0 in 0i64..=6 {
        let target_sum = 1 - 3 * a0;
        let target_sq = a0 * a0 + 1;
        let mut coords = vec![0i64; n];
        search_lines(a0, &mut coords, 0, target_sum, target_sq, tag, &mut out);
    }
    out.sort();
    Ok(out)
}

fn search_lines(
    a0: i64,
    coords: &mut [i64],
    at: usize,
    rem_sum: i64,
    rem_sq: i64,
    tag: LatticeTag,
    out: &mut Vec<PicClass>,
) {
    let left = (coords.len() - at) as i64;
    if at == coords.len() {
        if rem_sum == 0 && rem_sq == 0 {
            let mut full = Vec::with_capacity(coords.len() + 1);
            full.push(a0);
            full.extend_from_slice(coords);
            out.push(PicClass::new(tag, full).unwrap());
        }
        return;
    }
    // Feasibility: |rem_sum| <= left * max|a| and rem_sum^2 <= left * rem_sq.
    if rem_sq < 0 || rem_sum * rem_sum > left * rem_sq {
        return;
    }
    let bound = (0..).take_while(|b| b * b <= rem_sq).last().unwrap_or(0);
    for v in -bound..=bound {
        coords[at] = v;
        search_lines(a0, coords, at + 1, rem_sum - v, rem_sq - v * v, tag, out);
    }
    coords[at] = 0;
}

/// Total transform under blowing up one more point: appends a zero
/// coordinate, passing to the adjacent lattice of one lower degree.
pub fn blowup_pullback(d: &PicClass, to: LatticeTag) -> Result<PicClass, LatticeError> {
    if to.degree() + 1 != d.tag.degree() {
        return Err(LatticeError::NonAdjacentDegrees(d.tag.degree(), to.degree()));
    }
    let mut coords = d.coords.clone();
    coords.push(0);
    PicClass::new(to, coords)
}

/// Pushforward along contracting the last exceptional class: drops the last
/// coordinate, passing to the adjacent lattice of one higher degree.
pub fn blowdown_pushforward(d: &PicClass, to: LatticeTag) -> Result<PicClass, LatticeError> {
    if d.tag.degree() + 1 != to.degree() {
        return Err(LatticeError::NonAdjacentDegrees(d.tag.degree(), to.degree()));
    }
    let mut coords = d.coords.clone();
    coords.pop();
    PicClass::new(to, coords)
}

/// Class of the conic fibration on the cubic lattice obtained by blowing up
/// one more point of a degree-4 surface: F = -K - e6.  It satisfies F.F = 0,
/// -K.F = 2, and e6.F = 2 (the new exceptional curve is a bisection).
pub fn fiber_class() -> PicClass {
    let k = PicClass::canonical(LatticeTag::DP3);
    let e6 = PicClass::basis(LatticeTag::DP3, 6).unwrap();
    k.neg().sub(&e6).unwrap()
}

/// How a line of the cubic lattice sits relative to the conic fibration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberRole {
    /// D.F = 0: an irreducible component of a degenerate fiber.
    Component,
    /// D.F = 1: a section of the fibration.
    Section,
    /// D.F = 2: a bisection (only e6 itself).
    Bisection,
}

pub fn classify_wrt_fibration(d: &PicClass) -> Result<FiberRole, LatticeError> {
    if d.tag != LatticeTag::DP3 {
        return Err(LatticeError::WrongLattice(LatticeTag::DP3, d.tag));
    }
    if !d.is_line() {
        return Err(LatticeError::NotALine(d.to_string()));
    }
    match intersect(d, &fiber_class())? {
        0 => Ok(FiberRole::Component),
        1 => Ok(FiberRole::Section),
        2 => Ok(FiberRole::Bisection),
        v => unreachable!("line with D.F = {v}"),
    }
}

/// The five degenerate fibers of the conic fibration as unordered pairs
/// {E, F - E} of component lines, each pair sorted internally and the list
/// sorted by first member.
pub fn degenerate_fibers() -> Vec<(PicClass, PicClass)> {
    let f = fiber_class();
    let components: Vec<PicClass> = enumerate_lines(LatticeTag::DP3)
        .unwrap()
        .into_iter()
        .filter(|d| intersect(d, &f).unwrap() == 0)
        .collect();
    let mut pairs = Vec::new();
    for e in &components {
        let other = f.sub(e).unwrap();
        if *e < other {
            debug_assert!(other.is_line());
            debug_assert_eq!(intersect(e, &other).unwrap(), 1);
            pairs.push((e.clone(), other));
        }
    }
    pairs.sort();
    pairs
}

/// An integral linear automorphism of one of the lattices, stored as a
/// row-major matrix acting on coordinate columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeAut {
    tag: LatticeTag,
    mat: Vec<i64>,
}

impl LatticeAut {
    pub fn identity(tag: LatticeTag) -> Self {
        let n = tag.rank();
        let mut mat = vec![0; n * n];
        for i in 0..n {
            mat[i * n + i] = 1;
        }
        LatticeAut { tag, mat }
    }

    pub(crate) fn from_rows(tag: LatticeTag, mat: Vec<i64>) -> Self {
        assert_eq!(mat.len(), tag.rank() * tag.rank());
        LatticeAut { tag, mat }
    }

    /// Builds the automorphism sending basis vector e_i to `images[i]`.
    pub fn from_basis_images(tag: LatticeTag, images: &[PicClass]) -> Result<Self, LatticeError> {
        let n = tag.rank();
        if images.len() != n {
            return Err(LatticeError::WrongLength {
                degree: tag.degree(),
                want: n,
                got: images.len(),
            });
        }
        let mut mat = vec![0; n * n];
        for (c, img) in images.iter().enumerate() {
            if img.tag() != tag {
                return Err(LatticeError::TagMismatch(tag, img.tag()));
            }
            for r in 0..n {
                mat[r * n + c] = img.coords()[r];
            }
        }
        Ok(LatticeAut { tag, mat })
    }

    pub fn tag(&self) -> LatticeTag {
        self.tag
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.mat[r * self.tag.rank() + c]
    }

    pub fn apply(&self, d: &PicClass) -> Result<PicClass, LatticeError> {
        if d.tag() != self.tag {
            return Err(LatticeError::TagMismatch(self.tag, d.tag()));
        }
        let n = self.tag.rank();
        let coords = (0..n)
            .map(|r| (0..n).map(|c| self.mat[r * n + c] * d.coords()[c]).sum())
            .collect();
        PicClass::new(self.tag, coords)
    }

    /// self after other (matrix product).
    pub fn compose(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.tag != other.tag {
            return Err(LatticeError::TagMismatch(self.tag, other.tag));
        }
        let n = self.tag.rank();
        let mut mat = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                mat[r * n + c] = (0..n).map(|t| self.mat[r * n + t] * other.mat[t * n + c]).sum();
            }
        }
        Ok(LatticeAut { tag: self.tag, mat })
    }

    /// Checks that the map preserves the intersection form.
    pub fn is_isometry(&self) -> bool {
        let n = self.tag.rank();
        let sign = |i: usize| if i == 0 { 1i64 } else { -1 };
        for a in 0..n {
            for b in a..n {
                let mut s = 0;
                for r in 0..n {
                    s += sign(r) * self.mat[r * n + a] * self.mat[r * n + b];
                }
                let want = if a == b { sign(a) } else { 0 };
                if s != want {
                    return false;
                }
            }
        }
        true
    }

    pub fn fixes_canonical(&self) -> bool {
        let k = PicClass::canonical(self.tag);
        self.apply(&k).unwrap() == k
    }
}

impl fmt::Debug for LatticeAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.tag.rank();
        write!(f, "LatticeAut[{}](", self.tag)?;
        for r in 0..n {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..n {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.mat[r * n + c])?;
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_parse_and_display() {
        assert_eq!("dp4".parse::<LatticeTag>().unwrap(), LatticeTag::DP4);
        assert_eq!(LatticeTag::DP1.to_string(), "dp1");
        assert!("dp9".parse::<LatticeTag>().is_err());
        assert!("x3".parse::<LatticeTag>().is_err());
        assert_eq!(LatticeTag::DP4.rank(), 6);
    }

    #[test]
    fn canonical_class_norms() {
        // K.K equals the degree.
        for d in 1..=8u8 {
            let tag = LatticeTag::new(d).unwrap();
            let k = PicClass::canonical(tag);
            assert_eq!(k.self_intersection(), d as i64);
        }
    }

    #[test]
    fn line_counts() {
        assert_eq!(enumerate_lines(LatticeTag::DP4).unwrap().len(), 16);
        assert_eq!(enumerate_lines(LatticeTag::DP3).unwrap().len(), 27);
        assert_eq!(enumerate_lines(LatticeTag::DP2).unwrap().len(), 56);
        assert_eq!(enumerate_lines(LatticeTag::DP1).unwrap().len(), 240);
        assert!(enumerate_lines(LatticeTag::new(5).unwrap()).is_err());
    }

    #[test]
    fn degree4_lines_are_the_expected_sixteen() {
        // Independent oracle: write the 16 classes down directly.
        let tag = LatticeTag::DP4;
        let mut expected: Vec<PicClass> = Vec::new();
        for i in 1..=5 {
            expected.push(PicClass::basis(tag, i).unwrap());
        }
        for i in 1..=5 {
            for j in (i + 1)..=5 {
                let mut c = vec![1, 0, 0, 0, 0, 0];
                c[i] = -1;
                c[j] = -1;
                expected.push(PicClass::new(tag, c).unwrap());
            }
        }
        expected.push(PicClass::new(tag, vec![2, -1, -1, -1, -1, -1]).unwrap());
        expected.sort();
        assert_eq!(enumerate_lines(tag).unwrap(), expected);
    }

    #[test]
    fn each_degree4_line_meets_exactly_five() {
        let lines = enumerate_lines(LatticeTag::DP4).unwrap();
        for a in &lines {
            let mut meets = 0;
            for b in &lines {
                if a == b {
                    continue;
                }
                let p = intersect(a, b).unwrap();
                assert!(p == 0 || p == 1, "product {p} between distinct lines");
                meets += p;
            }
            assert_eq!(meets, 5);
        }
    }

    #[test]
    fn pullback_pushforward_round_trip() {
        let q = PicClass::new(LatticeTag::DP4, vec![2, -1, -1, -1, -1, -1]).unwrap();
        let up = blowup_pullback(&q, LatticeTag::DP3).unwrap();
        assert_eq!(up.coords(), &[2, -1, -1, -1, -1, -1, 0]);
        // Pullback preserves the pairing.
        let e1 = PicClass::basis(LatticeTag::DP4, 1).unwrap();
        let e1u = blowup_pullback(&e1, LatticeTag::DP3).unwrap();
        assert_eq!(intersect(&q, &e1).unwrap(), intersect(&up, &e1u).unwrap());
        assert_eq!(blowdown_pushforward(&up, LatticeTag::DP4).unwrap(), q);
        // Contracted class pushes to zero.
        let e6 = PicClass::basis(LatticeTag::DP3, 6).unwrap();
        assert_eq!(
            blowdown_pushforward(&e6, LatticeTag::DP4).unwrap(),
            PicClass::zero(LatticeTag::DP4)
        );
        assert!(blowup_pullback(&q, LatticeTag::DP2).is_err());
    }

    #[test]
    fn fiber_class_identities() {
        let f = fiber_class();
        assert_eq!(f.coords(), &[3, -1, -1, -1, -1, -1, -2]);
        assert_eq!(f.self_intersection(), 0);
        let k = PicClass::canonical(LatticeTag::DP3);
        assert_eq!(intersect(&k.neg(), &f).unwrap(), 2);
        let e6 = PicClass::basis(LatticeTag::DP3, 6).unwrap();
        assert_eq!(intersect(&e6, &f).unwrap(), 2);
    }

    #[test]
    fn fibration_role_counts() {
        let lines = enumerate_lines(LatticeTag::DP3).unwrap();
        let mut counts = [0usize; 3];
        for d in &lines {
            match classify_wrt_fibration(d).unwrap() {
                FiberRole::Component => counts[0] += 1,
                FiberRole::Section => counts[1] += 1,
                FiberRole::Bisection => counts[2] += 1,
            }
        }
        assert_eq!(counts, [10, 16, 1]);
        let not_line = PicClass::zero(LatticeTag::DP3);
        assert!(classify_wrt_fibration(&not_line).is_err());
        assert!(classify_wrt_fibration(&PicClass::zero(LatticeTag::DP4)).is_err());
    }

    #[test]
    fn five_degenerate_fibers() {
        let pairs = degenerate_fibers();
        assert_eq!(pairs.len(), 5);
        let f = fiber_class();
        for (e, e2) in &pairs {
            assert_eq!(e.add(e2).unwrap(), f);
            assert_eq!(intersect(e, e2).unwrap(), 1);
        }
    }

    #[test]
    fn display_form() {
        let q = PicClass::new(LatticeTag::DP4, vec![2, -1, -1, -1, -1, -1]).unwrap();
        assert_eq!(q.to_string(), "[2,-1,-1,-1,-1,-1]");
    }
}
