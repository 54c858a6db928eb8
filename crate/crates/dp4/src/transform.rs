//! Transformations between marked conic bundles: the canonical
//! marking-compatible isometry of cubic lattices, the induced bijection of
//! degree-4 line sets, and composable chains of elementary moves.

use num_rational::Ratio;
use thiserror::Error;

use crate::lattice::{
    blowdown_pushforward, blowup_pullback, enumerate_lines, fiber_class, intersect, LatticeAut,
    LatticeError, LatticeTag, PicClass,
};
use crate::linalg::{self, RatMat};
use crate::marking::{
    construction_s_to_x, construction_x_to_s, CbAction, CbMarking, Dp4Action, Dp4Marking,
    Dp4MarkingDto, CbMarkingDto, MarkingError,
};
use crate::weyl::{normal_subgroup_n, Subgroup, WeylElement, WeylError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Marking(#[from] MarkingError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("no unique surviving isometry candidate")]
    NoUniqueSurvivor,
    #[error("markings do not correspond to the isometry endpoints")]
    MarkingMismatch,
    #[error("chain is not well typed: {0}")]
    ChainType(String),
}

/// How the canonical isometry relates the user-supplied pair orientations:
/// `Aligned` sends each E_i to E'_i, `Crossed` sends each E_i to F'_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaPattern {
    Aligned,
    Crossed,
}

/// A marking-compatible isometry of the cubic lattice between two
/// conic-bundle markings.
#[derive(Clone, Debug)]
pub struct Isometry {
    source: CbMarking,
    target: CbMarking,
    pattern: ThetaPattern,
    aut: LatticeAut,
}

impl Isometry {
    pub fn source(&self) -> &CbMarking {
        &self.source
    }

    pub fn target(&self) -> &CbMarking {
        &self.target
    }

    pub fn pattern(&self) -> ThetaPattern {
        self.pattern
    }

    pub fn aut(&self) -> &LatticeAut {
        &self.aut
    }

    pub fn apply(&self, d: &PicClass) -> Result<PicClass, TransformError> {
        Ok(self.aut.apply(d)?)
    }
}

/// Spanning generators used for finite equivariance checks.
pub fn generating_set() -> Vec<WeylElement> {
    ["i1234", "(12)", "(12345)"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn theta_basis(m: &CbMarking) -> Vec<Vec<i64>> {
    let mut basis = vec![
        PicClass::anticanonical(LatticeTag::DP3).coords().to_vec(),
        fiber_class().coords().to_vec(),
    ];
    for i in 0..5 {
        basis.push(m.e(i).coords().to_vec());
    }
    basis
}

/// The canonical W(D5)-equivariant isometry between two marked conic
/// bundles: after replacing both markings by their odd-parity
/// representatives it sends E_i to E'_i (and fixes -K and the fiber class).
/// The pattern flag reports what this does to the original orientations.
pub fn theta_tilde(mx: &CbMarking, mx2: &CbMarking) -> Result<Isometry, TransformError> {
    let a = CbAction::new(mx)?;
    let b = CbAction::new(mx2)?;
    let basis = theta_basis(a.odd_marking());
    let images = theta_basis(b.odd_marking());
    let m = linalg::solve_transform(&basis, &images).ok_or(TransformError::NoUniqueSurvivor)?;
    let mat = m.to_integer().ok_or(TransformError::NoUniqueSurvivor)?;
    let aut = LatticeAut::from_rows(LatticeTag::DP3, mat);
    assert!(aut.is_isometry() && aut.fixes_canonical());
    // Lines go to lines; in particular the unique bisection e6 is fixed.
    for l in enumerate_lines(LatticeTag::DP3)? {
        assert!(aut.apply(&l)?.is_line());
    }
    let e6 = PicClass::basis(LatticeTag::DP3, 6)?;
    assert_eq!(aut.apply(&e6)?, e6);
    let pattern = if a.was_flipped() == b.was_flipped() {
        ThetaPattern::Aligned
    } else {
        ThetaPattern::Crossed
    };
    Ok(Isometry {
        source: mx.clone(),
        target: mx2.clone(),
        pattern,
        aut,
    })
}

/// Checks theta A(w) = A'(w) theta for every listed element, with the
/// actions induced by the isometry's endpoint markings.
pub fn verify_wd5_equivariance(
    iso: &Isometry,
    elements: &[WeylElement],
) -> Result<bool, TransformError> {
    let a = CbAction::new(&iso.source)?;
    let b = CbAction::new(&iso.target)?;
    for w in elements {
        let lhs = iso.aut.compose(&a.automorphism(w)?)?;
        let rhs = b.automorphism(w)?.compose(&iso.aut)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Diagnostic for one sign-pattern candidate of the compatible isometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CandidateReport {
    pub pattern: ThetaPattern,
    /// Preserves the rational intersection form (always true: both patterns
    /// are isometries of Pic tensor Q).
    pub rational_isometry: bool,
    /// Restricts to an integral automorphism of the lattice.
    pub integral: bool,
    /// Commutes with the two induced actions, checked rationally on a
    /// generating set.
    pub equivariant: bool,
}

/// Outcome of the uniqueness analysis: of the two sign patterns exactly one
/// is an integral equivariant isometry.
#[derive(Clone, Debug, serde::Serialize)]
pub struct UniquenessCertificate {
    pub candidates: [CandidateReport; 2],
    pub survivor: ThetaPattern,
    /// Dropping equivariance admits further integral isometries (witnessed
    /// by composing the survivor with a nontrivial induced automorphism).
    pub non_equivariant_isometry_exists: bool,
}

fn rat_from_aut(aut: &LatticeAut) -> RatMat {
    let n = aut.tag().rank();
    let mut m = RatMat::zero(n);
    for r in 0..n {
        for c in 0..n {
            m.set(r, c, Ratio::from_integer(aut.entry(r, c)));
        }
    }
    m
}

/// Tries both sign patterns on the user-supplied orientations and certifies
/// that exactly one yields an integral equivariant isometry.
pub fn uniqueness_check(
    mx: &CbMarking,
    mx2: &CbMarking,
) -> Result<UniquenessCertificate, TransformError> {
    let act_a = CbAction::new(mx)?;
    let act_b = CbAction::new(mx2)?;
    let gens = generating_set();
    let mut reports = Vec::new();
    for pattern in [ThetaPattern::Aligned, ThetaPattern::Crossed] {
        let basis = theta_basis(mx);
        let mut images = vec![
            PicClass::anticanonical(LatticeTag::DP3).coords().to_vec(),
            fiber_class().coords().to_vec(),
        ];
        for i in 0..5 {
            let img = match pattern {
                ThetaPattern::Aligned => mx2.e(i),
                ThetaPattern::Crossed => mx2.f(i),
            };
            images.push(img.coords().to_vec());
        }
        let m = linalg::solve_transform(&basis, &images).ok_or(TransformError::NoUniqueSurvivor)?;
        let integral = m.to_integer().is_some();
        let equivariant = gens.iter().try_fold(true, |acc, w| {
            let lhs = m.mul(&rat_from_aut(&act_a.automorphism(w)?));
            let rhs = rat_from_aut(&act_b.automorphism(w)?).mul(&m);
            Ok::<_, TransformError>(acc && lhs == rhs)
        })?;
        // Both patterns preserve the form rationally; record it explicitly
        // by checking on the basis.
        let rational_isometry = {
            let mut ok = true;
            let to_pic = |v: &Vec<i64>| PicClass::new(LatticeTag::DP3, v.clone()).unwrap();
            for (i, bi) in basis.iter().enumerate() {
                for (j, bj) in basis.iter().enumerate() {
                    let lhs = intersect(&to_pic(bi), &to_pic(bj))?;
                    let rhs = intersect(&to_pic(&images[i]), &to_pic(&images[j]))?;
                    ok &= lhs == rhs;
                }
            }
            ok
        };
        reports.push(CandidateReport {
            pattern,
            rational_isometry,
            integral,
            equivariant,
        });
    }
    let survivors: Vec<ThetaPattern> = reports
        .iter()
        .filter(|r| r.integral && r.equivariant)
        .map(|r| r.pattern)
        .collect();
    let [r0, r1] = [reports[0], reports[1]];
    let &[survivor] = survivors.as_slice() else {
        return Err(TransformError::NoUniqueSurvivor);
    };
    // Composing with a nontrivial induced automorphism gives an integral
    // isometry that fails equivariance.
    let non_equivariant_isometry_exists = {
        let theta = theta_tilde(mx, mx2)?;
        let twisted = act_b.automorphism(&"i12".parse().unwrap())?.compose(&theta.aut)?;
        let w: WeylElement = "(12345)".parse().unwrap();
        twisted.is_isometry()
            && twisted.compose(&act_a.automorphism(&w)?)?
                != act_b.automorphism(&w)?.compose(&twisted)?
    };
    Ok(UniquenessCertificate {
        candidates: [r0, r1],
        survivor,
        non_equivariant_isometry_exists,
    })
}

/// The bijection of degree-4 line sets induced by a compatible isometry:
/// lift a line to its section class, transport, push forward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuMap {
    source_marking: Dp4Marking,
    target_marking: Dp4Marking,
    /// Permutation of the sorted degree-4 line list.
    perm: Vec<usize>,
}

impl NuMap {
    pub fn source_marking(&self) -> &Dp4Marking {
        &self.source_marking
    }

    pub fn target_marking(&self) -> &Dp4Marking {
        &self.target_marking
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, line: &PicClass) -> Result<PicClass, TransformError> {
        let lines = enumerate_lines(LatticeTag::DP4)?;
        let idx = lines
            .binary_search(line)
            .map_err(|_| TransformError::MarkingMismatch)?;
        Ok(lines[self.perm[idx]].clone())
    }
}

/// Builds the line-set bijection for an isometry whose endpoints arise from
/// the given degree-4 markings by blowing up.
pub fn nu_map(
    m_s: &Dp4Marking,
    m_s2: &Dp4Marking,
    iso: &Isometry,
) -> Result<NuMap, TransformError> {
    let src = construction_s_to_x(m_s)?;
    if src != *iso.source() && src != iso.source().equivalent() {
        return Err(TransformError::MarkingMismatch);
    }
    let tgt = construction_s_to_x(m_s2)?;
    if tgt != *iso.target() && tgt != iso.target().equivalent() {
        return Err(TransformError::MarkingMismatch);
    }
    let lines = enumerate_lines(LatticeTag::DP4)?;
    let mut perm = Vec::with_capacity(lines.len());
    for l in &lines {
        let section = blowup_pullback(l, LatticeTag::DP3)?;
        debug_assert_eq!(intersect(&section, &fiber_class())?, 1);
        let image = iso.apply(&section)?;
        let down = blowdown_pushforward(&image, LatticeTag::DP4)?;
        let idx = lines
            .binary_search(&down)
            .map_err(|_| TransformError::MarkingMismatch)?;
        perm.push(idx);
    }
    let mut check: Vec<usize> = perm.clone();
    check.sort_unstable();
    if check != (0..lines.len()).collect::<Vec<_>>() {
        return Err(TransformError::MarkingMismatch);
    }
    let nu = NuMap {
        source_marking: m_s.clone(),
        target_marking: m_s2.clone(),
        perm,
    };
    // The marked lines correspond: Q to Q', L_i to L'_i.
    if nu.apply(m_s.q())? != *m_s2.q() {
        return Err(TransformError::MarkingMismatch);
    }
    for i in 0..5 {
        if nu.apply(&m_s.lines()[i])? != m_s2.lines()[i] {
            return Err(TransformError::MarkingMismatch);
        }
    }
    Ok(nu)
}

/// Checks nu a(w) = a'(w) nu on the line sets for every listed element.
pub fn verify_nu_equivariance(
    nu: &NuMap,
    elements: &[WeylElement],
) -> Result<bool, TransformError> {
    let a = Dp4Action::new(&nu.source_marking)?;
    let b = Dp4Action::new(&nu.target_marking)?;
    for w in elements {
        let pa = a.line_perm(w)?;
        let pb = b.line_perm(w)?;
        for i in 0..nu.perm.len() {
            if nu.perm[pa[i]] != pb[nu.perm[i]] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when the bijection is simultaneously equivariant for the sign
/// subgroup N (making it an isomorphism of N-torsors) and for G.
pub fn verify_torsor_iso(nu: &NuMap, g: &Subgroup) -> Result<bool, TransformError> {
    let mut elements = normal_subgroup_n(5)?;
    elements.extend_from_slice(g.elements());
    verify_nu_equivariance(nu, &elements)
}

/// One elementary move of a chain.
#[derive(Clone, Debug)]
pub enum ChainMove {
    /// Blow up; the marking must match the current surface marking (the
    /// first move anchors the chain's start).
    Blowup(Dp4Marking),
    /// Transport to another conic-bundle marking via the compatible isometry.
    Theta(CbMarking),
    /// Contract the bisection, returning to a degree-4 marking.
    Blowdown,
    /// Birational involution over a degree-2 point; fixes the line classes.
    Geiser,
    /// Birational involution over a degree-3 point; fixes the line classes.
    Bertini,
}

/// Serialization mirror for chains: tagged move records.
#[derive(serde::Serialize, serde::Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ChainMoveDto {
    Blowup { marking: Dp4MarkingDto },
    Theta { target: CbMarkingDto },
    Blowdown,
    Geiser,
    Bertini,
}

#[derive(serde::Serialize, serde::Deserialize)]
pub struct ChainDto {
    pub moves: Vec<ChainMoveDto>,
}

impl TryFrom<&ChainMoveDto> for ChainMove {
    type Error = MarkingError;

    fn try_from(dto: &ChainMoveDto) -> Result<Self, MarkingError> {
        Ok(match dto {
            ChainMoveDto::Blowup { marking } => ChainMove::Blowup(marking.try_into()?),
            ChainMoveDto::Theta { target } => ChainMove::Theta(target.try_into()?),
            ChainMoveDto::Blowdown => ChainMove::Blowdown,
            ChainMoveDto::Geiser => ChainMove::Geiser,
            ChainMoveDto::Bertini => ChainMove::Bertini,
        })
    }
}

impl From<&ChainMove> for ChainMoveDto {
    fn from(mv: &ChainMove) -> Self {
        match mv {
            ChainMove::Blowup(m) => ChainMoveDto::Blowup { marking: m.into() },
            ChainMove::Theta(m) => ChainMoveDto::Theta { target: m.into() },
            ChainMove::Blowdown => ChainMoveDto::Blowdown,
            ChainMove::Geiser => ChainMoveDto::Geiser,
            ChainMove::Bertini => ChainMoveDto::Bertini,
        }
    }
}

/// The composite of a well-typed chain: a bijection of the sixteen degree-4
/// line classes from the start marking's surface to the end marking's.
#[derive(Clone, Debug)]
pub struct ChainResult {
    pub start_marking: Dp4Marking,
    pub end_marking: Dp4Marking,
    /// Permutation of the sorted degree-4 line list.
    pub perm: Vec<usize>,
}

enum ChainState {
    Surface(Option<Dp4Marking>),
    Bundle(CbMarking),
}

/// Composes a chain of moves.  A chain must start and end in surface state;
/// a chain that never anchors a marking acts on the standard one.
pub fn chain_compose(moves: &[ChainMove]) -> Result<ChainResult, TransformError> {
    let n_lines = enumerate_lines(LatticeTag::DP4)?.len();
    let mut perm: Vec<usize> = (0..n_lines).collect();
    let mut state = ChainState::Surface(None);
    let mut start: Option<Dp4Marking> = None;
    for (step, mv) in moves.iter().enumerate() {
        let mismatch = |what: &str| {
            TransformError::ChainType(format!("move {} ({what}) in wrong state", step + 1))
        };
        state = match (state, mv) {
            (ChainState::Surface(cur), ChainMove::Blowup(m)) => {
                if let Some(cur) = cur {
                    if cur != *m {
                        return Err(TransformError::ChainType(format!(
                            "move {}: blowup marking does not match current surface marking",
                            step + 1
                        )));
                    }
                }
                start.get_or_insert_with(|| m.clone());
                ChainState::Bundle(construction_s_to_x(m)?)
            }
            (ChainState::Bundle(cur), ChainMove::Theta(target)) => {
                let iso = theta_tilde(&cur, target)?;
                let lines = enumerate_lines(LatticeTag::DP4)?;
                let step_perm: Vec<usize> = lines
                    .iter()
                    .map(|l| {
                        let sec = blowup_pullback(l, LatticeTag::DP3)?;
                        let down = blowdown_pushforward(&iso.apply(&sec)?, LatticeTag::DP4)?;
                        lines
                            .binary_search(&down)
                            .map_err(|_| TransformError::MarkingMismatch)
                    })
                    .collect::<Result<_, _>>()?;
                perm = perm.iter().map(|&i| step_perm[i]).collect();
                ChainState::Bundle(target.clone())
            }
            (ChainState::Bundle(cur), ChainMove::Blowdown) => {
                ChainState::Surface(Some(construction_x_to_s(&cur)?))
            }
            (ChainState::Surface(cur), ChainMove::Geiser) => {
                crate::involutions::birational_gb_on_dp4(2)
                    .map_err(|e| TransformError::ChainType(e.to_string()))?;
                ChainState::Surface(cur)
            }
            (ChainState::Surface(cur), ChainMove::Bertini) => {
                crate::involutions::birational_gb_on_dp4(3)
                    .map_err(|e| TransformError::ChainType(e.to_string()))?;
                ChainState::Surface(cur)
            }
            (_, ChainMove::Blowup(_)) => return Err(mismatch("blowup")),
            (_, ChainMove::Theta(_)) => return Err(mismatch("theta")),
            (_, ChainMove::Blowdown) => return Err(mismatch("blowdown")),
            (_, ChainMove::Geiser) => return Err(mismatch("geiser")),
            (_, ChainMove::Bertini) => return Err(mismatch("bertini")),
        };
    }
    let ChainState::Surface(cur) = state else {
        return Err(TransformError::ChainType("chain ends in bundle state".into()));
    };
    let start = start.unwrap_or_else(Dp4Marking::standard);
    let end = cur.unwrap_or_else(|| start.clone());
    Ok(ChainResult {
        start_marking: start,
        end_marking: end,
        perm,
    })
}

impl ChainResult {
    /// The composite as a line-set bijection.
    pub fn as_nu(&self) -> NuMap {
        NuMap {
            source_marking: self.start_marking.clone(),
            target_marking: self.end_marking.clone(),
            perm: self.perm.clone(),
        }
    }
}
