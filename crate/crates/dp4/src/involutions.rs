//! Involutions: the five quadric involutions of the degree-4 configuration,
//! and the Geiser and Bertini involutions on the degree-2 and degree-1
//! lattices together with their birational avatars on a degree-4 surface.

use thiserror::Error;

use crate::lattice::{
    blowup_pullback, intersect, LatticeAut, LatticeError, LatticeTag, PicClass,
};
use crate::marking::{Dp4Action, MarkingError};
use crate::weyl::{WeylElement, WeylError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvolutionError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Marking(#[from] MarkingError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("class {0} is not a line of the degree-4 lattice")]
    NotADp4Line(String),
    #[error("point degree must be 2 or 3, got {0}")]
    BadPointDegree(u8),
}

/// One of the five conjugate sign-flip involutions on a four-element index
/// set, indexed by the missing index: under a marking it sends Q to the line
/// labelled by that index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricInvolution {
    /// Missing index, 1-based.
    index: u8,
    element: WeylElement,
}

impl QuadricInvolution {
    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn element(&self) -> &WeylElement {
        &self.element
    }

    /// Image of a degree-4 line under the involution, through a marked
    /// action.
    pub fn apply_to_line(
        &self,
        line: &PicClass,
        action: &Dp4Action,
    ) -> Result<PicClass, InvolutionError> {
        let idx = action
            .line_index(line)
            .ok_or_else(|| InvolutionError::NotADp4Line(line.to_string()))?;
        let perm = action.line_perm(&self.element)?;
        Ok(action.lines()[perm[idx]].clone())
    }
}

/// The five quadric involutions, ordered by missing index.
pub fn quadric_involutions() -> [QuadricInvolution; 5] {
    std::array::from_fn(|i| {
        let missing = i as u8 + 1;
        let indices: Vec<u8> = (1..=5).filter(|&j| j != missing).collect();
        QuadricInvolution {
            index: missing,
            element: WeylElement::sign_element(5, &indices).unwrap(),
        }
    })
}

/// The bijection between the five lines meeting `q` and the index set
/// {1..5}: line L corresponds to the missing index of the unique quadric
/// involution sending `q` to L.  Pairs are returned sorted by index.
pub fn delta_correspondence(
    q: &PicClass,
    action: &Dp4Action,
) -> Result<Vec<(u8, PicClass)>, InvolutionError> {
    let q_idx = action
        .line_index(q)
        .ok_or_else(|| InvolutionError::NotADp4Line(q.to_string()))?;
    let mut out = Vec::with_capacity(5);
    for inv in quadric_involutions() {
        let perm = action.line_perm(&inv.element)?;
        let image = action.lines()[perm[q_idx]].clone();
        debug_assert_eq!(intersect(q, &image)?, 1);
        out.push((inv.index, image));
    }
    Ok(out)
}

/// The Geiser involution on the degree-2 lattice: D -> -D + (D.K) K.
pub fn geiser_involution() -> LatticeAut {
    reflection_in_k(LatticeTag::DP2, 1)
}

/// The Bertini involution on the degree-1 lattice: D -> -D + 2 (D.K) K.
pub fn bertini_involution() -> LatticeAut {
    reflection_in_k(LatticeTag::DP1, 2)
}

/// -1 on the orthogonal complement of K, +1 on K; the multiplier is
/// 2 / K.K.
fn reflection_in_k(tag: LatticeTag, multiplier: i64) -> LatticeAut {
    let k = PicClass::canonical(tag);
    let images: Vec<PicClass> = (0..tag.rank())
        .map(|i| {
            let e = PicClass::basis(tag, i).unwrap();
            let dk = intersect(&e, &k).unwrap();
            e.neg().add(&k.scale(multiplier * dk)).unwrap()
        })
        .collect();
    LatticeAut::from_basis_images(tag, &images).unwrap()
}

/// The birational Geiser (degree-2 point) or Bertini (degree-3 point)
/// involution of a degree-4 surface, modelled on the lattice of the blow-up.
#[derive(Clone, Debug)]
pub struct BirationalGb {
    /// Lattice of the blow-up: dp2 for Geiser, dp1 for Bertini.
    blown_tag: LatticeTag,
    involution: LatticeAut,
    /// Exceptional classes of the original contraction.
    exceptional: Vec<PicClass>,
    /// Their images: exceptional classes of the swapped contraction.
    swapped_exceptional: Vec<PicClass>,
}

impl BirationalGb {
    pub fn blown_tag(&self) -> LatticeTag {
        self.blown_tag
    }

    pub fn involution(&self) -> &LatticeAut {
        &self.involution
    }

    pub fn exceptional(&self) -> &[PicClass] {
        &self.exceptional
    }

    pub fn swapped_exceptional(&self) -> &[PicClass] {
        &self.swapped_exceptional
    }

    /// Pulls a degree-4 class up to the blown lattice and applies the
    /// involution there.
    pub fn map_dp4_class(&self, d: &PicClass) -> Result<PicClass, InvolutionError> {
        let mut up = d.clone();
        let mut degree = d.tag().degree();
        while degree > self.blown_tag.degree() {
            degree -= 1;
            up = blowup_pullback(&up, LatticeTag::new(degree)?)?;
        }
        Ok(self.involution.apply(&up)?)
    }
}

/// Builds the birational involution given the degree of the blown-up closed
/// point (2 for Geiser, 3 for Bertini).  Asserts that the involution is an
/// isometry fixing K and that it swaps the two extremal contraction patterns:
/// the exceptional classes of the blow-up map to a disjoint set of pairwise
/// disjoint lines defining the second contraction.
pub fn birational_gb_on_dp4(point_degree: u8) -> Result<BirationalGb, InvolutionError> {
    let (blown_tag, involution) = match point_degree {
        2 => (LatticeTag::DP2, geiser_involution()),
        3 => (LatticeTag::DP1, bertini_involution()),
        d => return Err(InvolutionError::BadPointDegree(d)),
    };
    assert!(involution.is_isometry());
    assert!(involution.fixes_canonical());
    let n = blown_tag.rank();
    let exceptional: Vec<PicClass> = (6..n)
        .map(|i| PicClass::basis(blown_tag, i).unwrap())
        .collect();
    let swapped_exceptional: Vec<PicClass> = exceptional
        .iter()
        .map(|e| involution.apply(e).unwrap())
        .collect();
    for (i, s) in swapped_exceptional.iter().enumerate() {
        assert!(s.is_line());
        assert!(!exceptional.contains(s), "contraction patterns must differ");
        for s2 in &swapped_exceptional[..i] {
            assert_eq!(intersect(s, s2)?, 0);
        }
    }
    Ok(BirationalGb {
        blown_tag,
        involution,
        exceptional,
        swapped_exceptional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_lines;
    use crate::marking::Dp4Marking;

    #[test]
    fn five_involutions_with_eight_two_cycles() {
        let action = Dp4Action::new(&Dp4Marking::standard()).unwrap();
        for inv in quadric_involutions() {
            let perm = action.line_perm(inv.element()).unwrap();
            // Fixed-point free with eight two-cycles on the sixteen lines.
            assert!(perm.iter().enumerate().all(|(i, &j)| i != j));
            assert!(perm.iter().enumerate().all(|(i, &j)| perm[j] == i));
            assert_eq!(inv.element().order(), 2);
        }
    }

    #[test]
    fn involutions_generate_sign_subgroup() {
        let gens: Vec<WeylElement> = quadric_involutions()
            .iter()
            .map(|i| i.element().clone())
            .collect();
        let sub = crate::weyl::Subgroup::generate(&gens).unwrap();
        assert_eq!(sub.order(), 16);
        // Pairwise commuting, product of all five is the identity.
        for a in &gens {
            for b in &gens {
                assert_eq!(a.compose(b).unwrap(), b.compose(a).unwrap());
            }
        }
        let prod = gens.iter().cloned().reduce(|a, b| a.compose(&b).unwrap()).unwrap();
        assert!(prod.is_identity());
    }

    #[test]
    fn delta_correspondence_on_standard_q() {
        let m = Dp4Marking::standard();
        let action = Dp4Action::new(&m).unwrap();
        let table = delta_correspondence(m.q(), &action).unwrap();
        assert_eq!(table.len(), 5);
        for (i, line) in &table {
            // Under the standard marking the involution missing i sends Q to L_i.
            assert_eq!(line, &m.lines()[(*i - 1) as usize]);
        }
        // The correspondence intertwines conjugation with the index action:
        // for sigma fixing Q, sigma iota_i sigma^-1 is the involution missing
        // sigma(i).
        let sigma: WeylElement = "(123)".parse().unwrap();
        let perm_sigma = action.line_perm(&sigma).unwrap();
        let q_idx = action.line_index(m.q()).unwrap();
        assert_eq!(perm_sigma[q_idx], q_idx);
        for inv in quadric_involutions() {
            let conj = inv.element().conjugate_by(&sigma).unwrap();
            let image_index = sigma.perm_image(inv.index()).unwrap();
            let expected = quadric_involutions()[(image_index - 1) as usize].element().clone();
            assert_eq!(conj, expected);
        }
    }

    #[test]
    fn apply_to_line_matches_permutation() {
        let m = Dp4Marking::standard();
        let action = Dp4Action::new(&m).unwrap();
        let inv = &quadric_involutions()[0];
        let img = inv.apply_to_line(m.q(), &action).unwrap();
        assert_eq!(img, m.lines()[0]);
        let not_line = PicClass::zero(LatticeTag::DP4);
        assert!(inv.apply_to_line(&not_line, &action).is_err());
    }

    #[test]
    fn geiser_formula_and_fixed_space() {
        let g = geiser_involution();
        let tag = LatticeTag::DP2;
        let k = PicClass::canonical(tag);
        assert_eq!(g.apply(&k).unwrap(), k);
        assert!(g.is_isometry());
        // Involution: g^2 = 1.
        assert_eq!(g.compose(&g).unwrap(), LatticeAut::identity(tag));
        // -1 on the orthogonal complement of K.
        let v = PicClass::basis(tag, 1).unwrap().sub(&PicClass::basis(tag, 2).unwrap()).unwrap();
        assert_eq!(g.apply(&v).unwrap(), v.neg());
        // The known image of an exceptional class.
        let e7 = PicClass::basis(tag, 7).unwrap();
        assert_eq!(g.apply(&e7).unwrap().coords(), &[3, -1, -1, -1, -1, -1, -1, -2]);
        // Permutes the 56 lines.
        let lines = enumerate_lines(tag).unwrap();
        for l in &lines {
            assert!(g.apply(l).unwrap().is_line());
        }
    }

    #[test]
    fn bertini_formula_and_fixed_space() {
        let g = bertini_involution();
        let tag = LatticeTag::DP1;
        let k = PicClass::canonical(tag);
        assert_eq!(g.apply(&k).unwrap(), k);
        assert!(g.is_isometry());
        assert_eq!(g.compose(&g).unwrap(), LatticeAut::identity(tag));
        let e8 = PicClass::basis(tag, 8).unwrap();
        assert_eq!(
            g.apply(&e8).unwrap().coords(),
            &[6, -2, -2, -2, -2, -2, -2, -2, -3]
        );
        for l in enumerate_lines(tag).unwrap() {
            assert!(g.apply(&l).unwrap().is_line());
        }
    }

    #[test]
    fn birational_involutions_swap_contractions() {
        for (deg, extra) in [(2u8, 2usize), (3, 3)] {
            let gb = birational_gb_on_dp4(deg).unwrap();
            assert_eq!(gb.exceptional().len(), extra);
            assert_eq!(gb.swapped_exceptional().len(), extra);
            // Applying the involution twice returns each class to itself.
            for e in gb.exceptional() {
                let twice = gb.involution().apply(&gb.involution().apply(e).unwrap()).unwrap();
                assert_eq!(&twice, e);
            }
            // Image of a degree-4 line is a line of the blown lattice.
            let e1 = PicClass::basis(LatticeTag::DP4, 1).unwrap();
            let img = gb.map_dp4_class(&e1).unwrap();
            assert!(img.is_line());
        }
        assert!(birational_gb_on_dp4(4).is_err());
    }

    #[test]
    fn geiser_image_of_e1_is_expected() {
        let gb = birational_gb_on_dp4(2).unwrap();
        let e1 = PicClass::basis(LatticeTag::DP4, 1).unwrap();
        let img = gb.map_dp4_class(&e1).unwrap();
        assert_eq!(img.coords(), &[3, -2, -1, -1, -1, -1, -1, -1]);
    }
}
