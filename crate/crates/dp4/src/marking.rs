//! Markings of the degree-4 lattice and of its conic-bundle blow-up, and the
//! W(D5) actions they induce on the Picard lattices.
//!
//! A degree-4 marking is a line Q together with an ordering L1..L5 of the
//! five lines meeting it.  A conic-bundle marking is a choice, for each of
//! the five degenerate fibers of the fibration on the cubic lattice, of an
//! ordered pair (E_i, F_i) of its two components.
//!
//! The group acts through the marking: permutations fix Q and permute the
//! L_i (resp. permute the fiber pairs), the sign flip on a four-element index
//! set sends Q to the line labelled by the missing index (resp. swaps E and F
//! inside the flipped pairs).  The action extends to the whole lattice by
//! exact rational linear algebra with a final integrality assertion.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::lattice::{
    blowdown_pushforward, blowup_pullback, enumerate_lines, fiber_class, intersect, FiberRole,
    LatticeAut, LatticeError, LatticeTag, PicClass,
};
use crate::linalg;
use crate::weyl::{WeylElement, WeylError};

const FULL: u8 = 0b11111;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MarkingError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("invalid marking: {0}")]
    Invalid(String),
    #[error("marking actions require group rank 5, got {0}")]
    RankNotFive(u8),
    #[error("induced action is not integral on the lattice")]
    NonIntegral,
    #[error("section lookup expects an odd index subset")]
    EvenSubset,
    #[error("no unique section for the requested subset")]
    NoUniqueSection,
    #[error("sections disagree on parity; marking data is corrupt")]
    ParityDisagreement,
}

/// Serialization mirror for a degree-4 marking: `{"Q": [...], "L": [[...]x5]}`.
#[derive(serde::Serialize, serde::Deserialize)]
pub struct Dp4MarkingDto {
    #[serde(rename = "Q")]
    pub q: Vec<i64>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<i64>>,
}

/// Serialization mirror for a conic-bundle marking:
/// `{"pairs": [[[E],[F]] x5]}`.
#[derive(serde::Serialize, serde::Deserialize)]
pub struct CbMarkingDto {
    pub pairs: Vec<[Vec<i64>; 2]>,
}

/// A line Q of the degree-4 lattice with an ordering of the five lines
/// meeting it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dp4Marking {
    q: PicClass,
    lines: [PicClass; 5],
}

impl Dp4Marking {
    pub fn new(q: PicClass, lines: [PicClass; 5]) -> Result<Self, MarkingError> {
        if q.tag() != LatticeTag::DP4 || !q.is_line() {
            return Err(MarkingError::Invalid(format!("Q = {q} is not a degree-4 line")));
        }
        for (i, l) in lines.iter().enumerate() {
            if l.tag() != LatticeTag::DP4 || !l.is_line() {
                return Err(MarkingError::Invalid(format!("L{} = {l} is not a line", i + 1)));
            }
            if intersect(l, &q)? != 1 {
                return Err(MarkingError::Invalid(format!("L{} does not meet Q", i + 1)));
            }
            for l2 in &lines[..i] {
                if intersect(l, l2)? != 0 {
                    return Err(MarkingError::Invalid(
                        "the five marked lines must be pairwise disjoint".into(),
                    ));
                }
            }
        }
        Ok(Dp4Marking { q, lines })
    }

    /// Q = 2e0 - e1 - ... - e5, L_i = e_i.
    pub fn standard() -> Self {
        let tag = LatticeTag::DP4;
        let q = PicClass::new(tag, vec![2, -1, -1, -1, -1, -1]).unwrap();
        let lines = std::array::from_fn(|i| PicClass::basis(tag, i + 1).unwrap());
        Dp4Marking { q, lines }
    }

    pub fn q(&self) -> &PicClass {
        &self.q
    }

    pub fn lines(&self) -> &[PicClass; 5] {
        &self.lines
    }

    /// All 1920 markings: 16 choices of Q times 120 orderings.
    pub fn all() -> Vec<Dp4Marking> {
        let lines = enumerate_lines(LatticeTag::DP4).unwrap();
        let mut out = Vec::with_capacity(1920);
        for q in &lines {
            let meeting: Vec<&PicClass> = lines
                .iter()
                .filter(|l| *l != q && intersect(l, q).unwrap() == 1)
                .collect();
            debug_assert_eq!(meeting.len(), 5);
            for p in permutations5() {
                let marked = std::array::from_fn(|i| meeting[p[i]].clone());
                out.push(Dp4Marking::new(q.clone(), marked).unwrap());
            }
        }
        out
    }
}

impl fmt::Debug for Dp4Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dp4Marking(Q={}, L=[", self.q)?;
        for (i, l) in self.lines.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "])")
    }
}

impl From<&Dp4Marking> for Dp4MarkingDto {
    fn from(m: &Dp4Marking) -> Self {
        Dp4MarkingDto {
            q: m.q.coords().to_vec(),
            l: m.lines.iter().map(|l| l.coords().to_vec()).collect(),
        }
    }
}

impl TryFrom<&Dp4MarkingDto> for Dp4Marking {
    type Error = MarkingError;

    fn try_from(dto: &Dp4MarkingDto) -> Result<Self, MarkingError> {
        let tag = LatticeTag::DP4;
        let q = PicClass::new(tag, dto.q.clone())?;
        if dto.l.len() != 5 {
            return Err(MarkingError::Invalid("expected exactly five L entries".into()));
        }
        let mut lines = Vec::new();
        for c in &dto.l {
            lines.push(PicClass::new(tag, c.clone())?);
        }
        Dp4Marking::new(q, lines.try_into().map_err(|_| MarkingError::Invalid("L".into()))?)
    }
}

fn permutations5() -> Vec<[usize; 5]> {
    let mut out = Vec::with_capacity(120);
    let mut v = [0usize, 1, 2, 3, 4];
    fn rec(v: &mut [usize; 5], at: usize, out: &mut Vec<[usize; 5]>) {
        if at == 5 {
            out.push(*v);
            return;
        }
        for i in at..5 {
            v.swap(at, i);
            rec(v, at + 1, out);
            v.swap(at, i);
        }
    }
    rec(&mut v, 0, &mut out);
    out
}

/// The W(D5) action on the degree-4 lattice induced by a marking.
///
/// Internally every line carries a label in the sign subgroup N: Q is
/// labelled by the empty set, L_i by the four-element set missing i, and the
/// line meeting exactly L_i and L_j by {i, j}; the element (S, sigma) sends
/// label T to S xor sigma(T).  The lattice automorphism is the unique linear
/// extension of the resulting line permutation.
pub struct Dp4Action {
    marking: Dp4Marking,
    lines: Vec<PicClass>,
    /// Sign mask labelling each line, indexed like `lines`.
    labels: Vec<u8>,
    /// Inverse lookup: line index for each of the 32 possible masks (only
    /// even-cardinality masks are populated).
    line_of_label: [usize; 32],
    /// Lazily built inverse of the faithful action: line permutation back to
    /// the group element inducing it.
    recover: std::sync::OnceLock<std::collections::HashMap<Vec<usize>, WeylElement>>,
}

impl Dp4Action {
    pub fn new(marking: &Dp4Marking) -> Result<Self, MarkingError> {
        let lines = enumerate_lines(LatticeTag::DP4)?;
        let mut labels = vec![0u8; lines.len()];
        let mut line_of_label = [usize::MAX; 32];
        let mut assign = |idx: usize, label: u8, labels: &mut Vec<u8>| -> Result<(), MarkingError> {
            if line_of_label[label as usize] != usize::MAX {
                return Err(MarkingError::Invalid("duplicate line label".into()));
            }
            labels[idx] = label;
            line_of_label[label as usize] = idx;
            Ok(())
        };
        let index_of = |c: &PicClass| lines.binary_search(c).expect("line list is sorted");
        assign(index_of(marking.q()), 0, &mut labels)?;
        for (i, l) in marking.lines().iter().enumerate() {
            assign(index_of(l), FULL ^ (1 << i), &mut labels)?;
        }
        for i in 0..5usize {
            for j in (i + 1)..5 {
                let mut found = None;
                for (idx, d) in lines.iter().enumerate() {
                    if intersect(d, marking.q())? != 0 || d == marking.q() {
                        continue;
                    }
                    let mut ok = true;
                    for (k, l) in marking.lines().iter().enumerate() {
                        let want = i64::from(k == i || k == j);
                        if intersect(d, l)? != want {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        if found.replace(idx).is_some() {
                            return Err(MarkingError::NoUniqueSection);
                        }
                    }
                }
                let idx = found.ok_or(MarkingError::NoUniqueSection)?;
                assign(idx, (1 << i) | (1 << j), &mut labels)?;
            }
        }
        Ok(Dp4Action {
            marking: marking.clone(),
            lines,
            labels,
            line_of_label,
            recover: std::sync::OnceLock::new(),
        })
    }

    /// The unique group element inducing a given line permutation, if any.
    pub fn recover_element(&self, perm: &[usize]) -> Option<WeylElement> {
        let table = self.recover.get_or_init(|| {
            let mut table = std::collections::HashMap::new();
            for w in crate::weyl::enumerate_group(5).expect("rank 5") {
                table.insert(self.line_perm(&w).expect("rank 5"), w);
            }
            table
        });
        table.get(perm).copied()
    }

    pub fn marking(&self) -> &Dp4Marking {
        &self.marking
    }

    /// The sixteen lines in their canonical sorted order.
    pub fn lines(&self) -> &[PicClass] {
        &self.lines
    }

    pub fn line_index(&self, c: &PicClass) -> Option<usize> {
        self.lines.binary_search(c).ok()
    }

    /// Sign-subgroup label of a line (even-cardinality bitmask over {1..5}).
    pub fn label_of(&self, idx: usize) -> u8 {
        self.labels[idx]
    }

    pub fn line_with_label(&self, label: u8) -> &PicClass {
        &self.lines[self.line_of_label[label as usize]]
    }

    /// The permutation of the line list induced by `w`: `out[i]` is the index
    /// of the image of line `i`.
    pub fn line_perm(&self, w: &WeylElement) -> Result<Vec<usize>, MarkingError> {
        if w.rank() != 5 {
            return Err(MarkingError::RankNotFive(w.rank()));
        }
        Ok(self
            .labels
            .iter()
            .map(|&t| self.line_of_label[(w.sign_mask() ^ w.permute_mask(t)) as usize])
            .collect())
    }

    /// The induced lattice automorphism, computed by linear extension of the
    /// line permutation and verified to be an integral isometry fixing K and
    /// agreeing with the permutation on all sixteen lines.
    pub fn automorphism(&self, w: &WeylElement) -> Result<LatticeAut, MarkingError> {
        let perm = self.line_perm(w)?;
        let vectors: Vec<Vec<i64>> = self.lines.iter().map(|l| l.coords().to_vec()).collect();
        let basis_idx = linalg::independent_subset(&vectors, LatticeTag::DP4.rank());
        debug_assert_eq!(basis_idx.len(), 6);
        let basis: Vec<Vec<i64>> = basis_idx.iter().map(|&i| vectors[i].clone()).collect();
        let images: Vec<Vec<i64>> = basis_idx.iter().map(|&i| vectors[perm[i]].clone()).collect();
        let m = linalg::solve_transform(&basis, &images).ok_or(MarkingError::NonIntegral)?;
        let mat = m.to_integer().ok_or(MarkingError::NonIntegral)?;
        let aut = LatticeAut::from_rows(LatticeTag::DP4, mat);
        for (i, l) in self.lines.iter().enumerate() {
            if aut.apply(l)? != self.lines[perm[i]] {
                return Err(MarkingError::Invalid(
                    "linear extension disagrees with the line permutation".into(),
                ));
            }
        }
        if !aut.is_isometry() || !aut.fixes_canonical() {
            return Err(MarkingError::Invalid("induced map is not an isometry fixing K".into()));
        }
        Ok(aut)
    }
}

/// Convenience wrapper: the automorphism of the degree-4 lattice induced by
/// `w` through the marking `m`.
pub fn induced_action_dp4(m: &Dp4Marking, w: &WeylElement) -> Result<LatticeAut, MarkingError> {
    Dp4Action::new(m)?.automorphism(w)
}

/// Parity type of a conic-bundle marking: the sixteen sections all meet an
/// odd number, or all an even number, of the chosen components E_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// An ordering of the five degenerate fibers of the conic fibration with a
/// chosen pair orientation (E_i, F_i) in each.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CbMarking {
    pairs: [(PicClass, PicClass); 5],
}

impl CbMarking {
    pub fn new(pairs: [(PicClass, PicClass); 5]) -> Result<Self, MarkingError> {
        let f = fiber_class();
        let mut seen: BTreeSet<PicClass> = BTreeSet::new();
        for (i, (e, f2)) in pairs.iter().enumerate() {
            for c in [e, f2] {
                if c.tag() != LatticeTag::DP3
                    || !c.is_line()
                    || crate::lattice::classify_wrt_fibration(c)? != FiberRole::Component
                {
                    return Err(MarkingError::Invalid(format!(
                        "pair {} member {c} is not a fiber component",
                        i + 1
                    )));
                }
                if !seen.insert(c.clone()) {
                    return Err(MarkingError::Invalid("repeated fiber component".into()));
                }
            }
            if e.add(f2)? != f {
                return Err(MarkingError::Invalid(format!(
                    "pair {} does not sum to the fiber class",
                    i + 1
                )));
            }
        }
        Ok(CbMarking { pairs })
    }

    /// E_i = e0 - e_i - e6 with F_i its complement in the fiber.
    pub fn standard() -> Self {
        let tag = LatticeTag::DP3;
        let f = fiber_class();
        let pairs = std::array::from_fn(|i| {
            let mut c = vec![1, 0, 0, 0, 0, 0, -1];
            c[i + 1] = -1;
            let e = PicClass::new(tag, c).unwrap();
            let other = f.sub(&e).unwrap();
            (e, other)
        });
        CbMarking { pairs }
    }

    pub fn pairs(&self) -> &[(PicClass, PicClass); 5] {
        &self.pairs
    }

    pub fn e(&self, i: usize) -> &PicClass {
        &self.pairs[i].0
    }

    pub fn f(&self, i: usize) -> &PicClass {
        &self.pairs[i].1
    }

    /// The equivalent marking: every pair swapped.  Exactly one of a marking
    /// and its equivalent has odd parity type.
    pub fn equivalent(&self) -> Self {
        CbMarking {
            pairs: std::array::from_fn(|i| (self.pairs[i].1.clone(), self.pairs[i].0.clone())),
        }
    }

    /// The sixteen section classes (lines with D.F = 1), sorted.
    pub fn sections() -> Vec<PicClass> {
        let f = fiber_class();
        enumerate_lines(LatticeTag::DP3)
            .unwrap()
            .into_iter()
            .filter(|d| intersect(d, &f).unwrap() == 1)
            .collect()
    }

    /// Bitmask over {1..5} of the chosen components met by a section.
    pub fn section_subset(&self, s: &PicClass) -> Result<u8, MarkingError> {
        let mut mask = 0u8;
        for (i, (e, _)) in self.pairs.iter().enumerate() {
            match intersect(s, e)? {
                1 => mask |= 1 << i,
                0 => {}
                v => {
                    return Err(MarkingError::Invalid(format!(
                        "section meets component with multiplicity {v}"
                    )))
                }
            }
        }
        Ok(mask)
    }

    /// The common parity of all sections; errors if they disagree (which
    /// cannot happen for a valid marking).
    pub fn parity(&self) -> Result<Parity, MarkingError> {
        let mut parity = None;
        for s in Self::sections() {
            let p = if self.section_subset(&s)?.count_ones() % 2 == 1 {
                Parity::Odd
            } else {
                Parity::Even
            };
            if *parity.get_or_insert(p) != p {
                return Err(MarkingError::ParityDisagreement);
            }
        }
        Ok(parity.expect("sixteen sections exist"))
    }

    /// The odd-parity representative of {self, equivalent}; the flag reports
    /// whether a swap was needed.
    pub fn canonical_odd(&self) -> Result<(Self, bool), MarkingError> {
        match self.parity()? {
            Parity::Odd => Ok((self.clone(), false)),
            Parity::Even => Ok((self.equivalent(), true)),
        }
    }

    /// All 3840 conic-bundle markings: 120 fiber orderings times 32 pair
    /// orientations.
    pub fn all() -> Vec<CbMarking> {
        let fibers = crate::lattice::degenerate_fibers();
        let mut out = Vec::with_capacity(3840);
        for p in permutations5() {
            for flips in 0u8..32 {
                let pairs = std::array::from_fn(|i| {
                    let (a, b) = &fibers[p[i]];
                    if flips & (1 << i) != 0 {
                        (b.clone(), a.clone())
                    } else {
                        (a.clone(), b.clone())
                    }
                });
                out.push(CbMarking { pairs });
            }
        }
        out
    }
}

impl fmt::Debug for CbMarking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CbMarking(")?;
        for (i, (e, fi)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({e},{fi})")?;
        }
        write!(f, ")")
    }
}

impl From<&CbMarking> for CbMarkingDto {
    fn from(m: &CbMarking) -> Self {
        CbMarkingDto {
            pairs: m
                .pairs
                .iter()
                .map(|(e, f)| [e.coords().to_vec(), f.coords().to_vec()])
                .collect(),
        }
    }
}

impl TryFrom<&CbMarkingDto> for CbMarking {
    type Error = MarkingError;

    fn try_from(dto: &CbMarkingDto) -> Result<Self, MarkingError> {
        if dto.pairs.len() != 5 {
            return Err(MarkingError::Invalid("expected exactly five pairs".into()));
        }
        let tag = LatticeTag::DP3;
        let mut pairs = Vec::new();
        for [e, f] in &dto.pairs {
            pairs.push((PicClass::new(tag, e.clone())?, PicClass::new(tag, f.clone())?));
        }
        CbMarking::new(pairs.try_into().map_err(|_| MarkingError::Invalid("pairs".into()))?)
    }
}

/// The section meeting exactly the chosen components named by an odd bitmask;
/// requires an odd-parity marking.
pub fn unique_section(m: &CbMarking, subset: u8) -> Result<PicClass, MarkingError> {
    if subset.count_ones() % 2 != 1 || subset & !FULL != 0 {
        return Err(MarkingError::EvenSubset);
    }
    if m.parity()? != Parity::Odd {
        return Err(MarkingError::Invalid("unique_section requires an odd-parity marking".into()));
    }
    let mut found = None;
    for s in CbMarking::sections() {
        if m.section_subset(&s)? == subset {
            if found.replace(s).is_some() {
                return Err(MarkingError::NoUniqueSection);
            }
        }
    }
    found.ok_or(MarkingError::NoUniqueSection)
}

/// The W(D5) action on the cubic lattice induced by a conic-bundle marking
/// (through its odd-parity representative).
pub struct CbAction {
    original: CbMarking,
    odd: CbMarking,
    flipped: bool,
}

impl CbAction {
    pub fn new(m: &CbMarking) -> Result<Self, MarkingError> {
        let (odd, flipped) = m.canonical_odd()?;
        Ok(CbAction {
            original: m.clone(),
            odd,
            flipped,
        })
    }

    pub fn original_marking(&self) -> &CbMarking {
        &self.original
    }

    pub fn odd_marking(&self) -> &CbMarking {
        &self.odd
    }

    /// True when the odd representative is the swap of the supplied marking.
    pub fn was_flipped(&self) -> bool {
        self.flipped
    }

    /// Image of E_i (0-based, odd representative) under `w`: permutations
    /// move the fiber index, sign flips swap E and F inside flipped pairs.
    pub fn component_image(&self, w: &WeylElement, i: usize) -> Result<PicClass, MarkingError> {
        if w.rank() != 5 {
            return Err(MarkingError::RankNotFive(w.rank()));
        }
        let j = (w.perm_image(i as u8 + 1)? - 1) as usize;
        Ok(if w.sign_mask() & (1 << j) != 0 {
            self.odd.f(j).clone()
        } else {
            self.odd.e(j).clone()
        })
    }

    /// The induced lattice automorphism: determined on the basis
    /// {C, E1..E5, F} where C is the section meeting every E_i; C maps to the
    /// unique section meeting every image component, F is fixed.
    pub fn automorphism(&self, w: &WeylElement) -> Result<LatticeAut, MarkingError> {
        let f = fiber_class();
        let c = unique_section(&self.odd, FULL)?;
        let imgs: Vec<PicClass> = (0..5)
            .map(|i| self.component_image(w, i))
            .collect::<Result<_, _>>()?;
        let mut c_img = None;
        for s in CbMarking::sections() {
            if imgs.iter().try_fold(true, |acc, e| {
                intersect(&s, e).map(|v| acc && v == 1)
            })? {
                if c_img.replace(s).is_some() {
                    return Err(MarkingError::NoUniqueSection);
                }
            }
        }
        let c_img = c_img.ok_or(MarkingError::NoUniqueSection)?;
        let mut basis: Vec<Vec<i64>> = vec![c.coords().to_vec()];
        let mut images: Vec<Vec<i64>> = vec![c_img.coords().to_vec()];
        for i in 0..5 {
            basis.push(self.odd.e(i).coords().to_vec());
            images.push(imgs[i].coords().to_vec());
        }
        basis.push(f.coords().to_vec());
        images.push(f.coords().to_vec());
        let m = linalg::solve_transform(&basis, &images).ok_or(MarkingError::NonIntegral)?;
        let mat = m.to_integer().ok_or(MarkingError::NonIntegral)?;
        let aut = LatticeAut::from_rows(LatticeTag::DP3, mat);
        if !aut.is_isometry() || !aut.fixes_canonical() {
            return Err(MarkingError::Invalid("induced map is not an isometry fixing K".into()));
        }
        debug_assert_eq!(aut.apply(&f)?, f);
        Ok(aut)
    }
}

/// Convenience wrapper: the automorphism of the cubic lattice induced by `w`
/// through the conic-bundle marking `m`.
pub fn induced_action_cb(m: &CbMarking, w: &WeylElement) -> Result<LatticeAut, MarkingError> {
    CbAction::new(m)?.automorphism(w)
}

/// Blowing up: a degree-4 marking determines a conic-bundle marking by
/// E_i = -K - f*Q - f*L_i, with F_i its fiber complement.
pub fn construction_s_to_x(m: &Dp4Marking) -> Result<CbMarking, MarkingError> {
    let tag = LatticeTag::DP3;
    let minus_k = PicClass::anticanonical(tag);
    let f = fiber_class();
    let q_up = blowup_pullback(m.q(), tag)?;
    let mut pairs = Vec::new();
    for l in m.lines() {
        let e = minus_k.sub(&q_up)?.sub(&blowup_pullback(l, tag)?)?;
        let other = f.sub(&e)?;
        pairs.push((e, other));
    }
    CbMarking::new(pairs.try_into().expect("five pairs"))
}

/// Blowing down: the odd representative of a conic-bundle marking determines
/// a degree-4 marking; L_i is the pushforward of the section meeting exactly
/// E_i, and Q the pushforward of the section meeting every E_i.
pub fn construction_x_to_s(m: &CbMarking) -> Result<Dp4Marking, MarkingError> {
    let (odd, _) = m.canonical_odd()?;
    let to = LatticeTag::DP4;
    let q = blowdown_pushforward(&unique_section(&odd, FULL)?, to)?;
    let lines: Vec<PicClass> = (0..5)
        .map(|i| blowdown_pushforward(&unique_section(&odd, 1 << i)?, to).map_err(Into::into))
        .collect::<Result<_, MarkingError>>()?;
    Dp4Marking::new(q, lines.try_into().expect("five lines"))
}

/// Checks that pullback intertwines the two induced actions for every listed
/// group element: f* A_S(w) = A_X(w) f*.  The conic-bundle marking should
/// arise from the degree-4 marking by blowing up.
pub fn verify_pullback_equivariance(
    m_s: &Dp4Marking,
    m_x: &CbMarking,
    elements: &[WeylElement],
) -> Result<bool, MarkingError> {
    let act_s = Dp4Action::new(m_s)?;
    let act_x = CbAction::new(m_x)?;
    for w in elements {
        let a_s = act_s.automorphism(w)?;
        let a_x = act_x.automorphism(w)?;
        for i in 0..LatticeTag::DP4.rank() {
            let e = PicClass::basis(LatticeTag::DP4, i)?;
            let lhs = blowup_pullback(&a_s.apply(&e)?, LatticeTag::DP3)?;
            let rhs = a_x.apply(&blowup_pullback(&e, LatticeTag::DP3)?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
