//! Degree-windowed graded vector spaces and maps between them.
//!
//! Degrees outside a window have dimension 0; a map of internal degree
//! `shift` sends degree `n` of its source to degree `n + shift` of its target
//! and stores one dense block per source degree. Missing blocks are zero.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` of degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeWindow {
    lo: i64,
    hi: i64,
}

impl DegreeWindow {
    pub fn new(lo: i64, hi: i64) -> Result<DegreeWindow> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(DegreeWindow { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The window shrunk by `margin` on both sides.
    pub fn interior(&self, margin: i64) -> Result<DegreeWindow> {
        let (lo, hi) = (self.lo.saturating_add(margin), self.hi.saturating_sub(margin));
        if lo > hi {
            return Err(Error::WindowTooSmall {
                lo: self.lo,
                hi: self.hi,
                margin,
            });
        }
        Ok(DegreeWindow { lo, hi })
    }

    /// The window enlarged by `by` on both sides.
    pub fn grow(&self, by: i64) -> DegreeWindow {
        DegreeWindow {
            lo: self.lo.saturating_sub(by),
            hi: self.hi.saturating_add(by),
        }
    }

    pub fn translate(&self, by: i64) -> DegreeWindow {
        DegreeWindow {
            lo: self.lo.saturating_add(by),
            hi: self.hi.saturating_add(by),
        }
    }

    pub fn intersect(&self, other: &DegreeWindow) -> Option<DegreeWindow> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(DegreeWindow { lo, hi })
    }
}

/// Finite-dimensional shadow of a graded module on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    window: DegreeWindow,
    dims: Vec<usize>,
}

impl GradedSpace {
    pub fn new(window: DegreeWindow, dims: Vec<usize>) -> GradedSpace {
        assert_eq!(dims.len(), window.len(), "one dimension per window degree");
        GradedSpace { window, dims }
    }

    pub fn from_fn(window: DegreeWindow, f: impl Fn(i64) -> usize) -> GradedSpace {
        GradedSpace {
            window,
            dims: window.degrees().map(f).collect(),
        }
    }

    pub fn zero(window: DegreeWindow) -> GradedSpace {
        GradedSpace::from_fn(window, |_| 0)
    }

    pub fn window(&self) -> DegreeWindow {
        self.window
    }

    /// Dimension at `n`; zero outside the window.
    pub fn dim(&self, n: i64) -> usize {
        if self.window.contains(n) {
            self.dims[(n - self.window.lo) as usize]
        } else {
            0
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `(degree, dim)` pairs restricted to `w`.
    pub fn table(&self, w: &DegreeWindow) -> Vec<(i64, usize)> {
        w.degrees().map(|n| (n, self.dim(n))).collect()
    }

    pub fn is_zero_on(&self, w: &DegreeWindow) -> bool {
        w.degrees().all(|n| self.dim(n) == 0)
    }

    pub fn direct_sum(&self, other: &GradedSpace) -> GradedSpace {
        assert_eq!(self.window, other.window);
        GradedSpace {
            window: self.window,
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
        }
    }
}

/// A graded linear map of internal degree `shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    field: Field,
    source: GradedSpace,
    target: GradedSpace,
    shift: i64,
    blocks: BTreeMap<i64, Matrix>,
}

impl GradedMap {
    /// Builds a map from explicit blocks keyed by source degree, checking shapes.
    pub fn new(
        field: Field,
        source: GradedSpace,
        target: GradedSpace,
        shift: i64,
        blocks: BTreeMap<i64, Matrix>,
    ) -> Result<GradedMap> {
        for (&n, b) in &blocks {
            let want = (target.dim(n + shift), source.dim(n));
            if (b.rows(), b.cols()) != want {
                return Err(Error::ShapeMismatch {
                    degree: n,
                    detail: format!(
                        "block is {}x{}, expected {}x{}",
                        b.rows(),
                        b.cols(),
                        want.0,
                        want.1
                    ),
                });
            }
        }
        let blocks = blocks
            .into_iter()
            .filter(|(_, b)| b.rows() > 0 && b.cols() > 0)
            .collect();
        Ok(GradedMap {
            field,
            source,
            target,
            shift,
            blocks,
        })
    }

    pub fn zero(field: Field, source: GradedSpace, target: GradedSpace, shift: i64) -> GradedMap {
        GradedMap {
            field,
            source,
            target,
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(field: Field, space: &GradedSpace) -> GradedMap {
        let blocks = space
            .window
            .degrees()
            .filter(|&n| space.dim(n) > 0)
            .map(|n| (n, Matrix::identity(field, space.dim(n))))
            .collect();
        GradedMap {
            field,
            source: space.clone(),
            target: space.clone(),
            shift: 0,
            blocks,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// The block at source degree `n`, materializing zeros when absent.
    pub fn block(&self, n: i64) -> Matrix {
        self.blocks.get(&n).cloned().unwrap_or_else(|| {
            Matrix::zeros(self.field, self.target.dim(n + self.shift), self.source.dim(n))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    /// `g ∘ f`, where `f = self`'s right operand: `compose(g, f)`.
    pub fn compose(g: &GradedMap, f: &GradedMap) -> Result<GradedMap> {
        if f.target != g.source {
            let degree = f
                .target
                .window
                .degrees()
                .find(|&n| f.target.dim(n) != g.source.dim(n))
                .unwrap_or(f.target.window.lo);
            return Err(Error::ShapeMismatch {
                degree,
                detail: "target of the first map differs from source of the second".into(),
            });
        }
        let mut blocks = BTreeMap::new();
        for n in f.source.window.degrees() {
            let m = f.block(n);
            let h = g.block(n + f.shift);
            let prod = h.mul(&m).ok_or_else(|| Error::ShapeMismatch {
                degree: n,
                detail: "inner dimensions differ".into(),
            })?;
            blocks.insert(n, prod);
        }
        GradedMap::new(f.field, f.source.clone(), g.target.clone(), f.shift + g.shift, blocks)
    }

    /// Per-degree kernel and image, with explicit bases.
    pub fn kernel_image(&self) -> KernelImage {
        let w = self.source.window;
        let tw = self.target.window;
        let mut kernel_basis = BTreeMap::new();
        let mut image_basis = BTreeMap::new();
        let mut kdims = vec![0; w.len()];
        let mut idims = vec![0; tw.len()];
        for n in w.degrees() {
            let b = self.block(n);
            let k = b.kernel();
            let im = b.column_space();
            assert_eq!(
                k.cols() + im.cols(),
                self.source.dim(n),
                "rank-nullity fails at degree {n}"
            );
            kdims[(n - w.lo) as usize] = k.cols();
            let t = n + self.shift;
            if tw.contains(t) {
                idims[(t - tw.lo) as usize] = im.cols();
                image_basis.insert(t, im);
            }
            kernel_basis.insert(n, k);
        }
        KernelImage {
            kernel: GradedSpace::new(w, kdims),
            image: GradedSpace::new(tw, idims),
            kernel_basis,
            image_basis,
        }
    }

    /// Middle homology `ker(f_out) / im(f_in)` per degree of the middle space.
    pub fn homology_at(f_in: &GradedMap, f_out: &GradedMap) -> Result<Homology> {
        if f_in.target != f_out.source {
            return Err(Error::ShapeMismatch {
                degree: f_in.target.window.lo,
                detail: "maps do not share a middle space".into(),
            });
        }
        let middle = f_in.target.clone();
        let w = middle.window;
        for n in f_in.source.window.degrees() {
            let m = n + f_in.shift;
            if !w.contains(m) {
                continue;
            }
            let comp = f_out.block(m).mul(&f_in.block(n)).expect("shapes checked");
            if !comp.is_zero() {
                return Err(Error::NotAComplex { degree: m });
            }
        }
        let mut dims = vec![0; w.len()];
        let mut reps = BTreeMap::new();
        for m in w.degrees() {
            let dim = middle.dim(m);
            if dim == 0 {
                continue;
            }
            let ker = f_out.block(m).kernel();
            let src = m - f_in.shift;
            let img = if f_in.source.window.contains(src) {
                f_in.block(src).column_space()
            } else {
                Matrix::zeros(f_in.field, dim, 0)
            };
            // kernel vectors independent of the image span the homology
            let stacked = img.hstack(&ker);
            let (_, pivots) = stacked.rref();
            let chosen: Vec<usize> = pivots
                .into_iter()
                .filter(|&p| p >= img.cols())
                .map(|p| p - img.cols())
                .collect();
            let rows = (0..dim)
                .map(|r| chosen.iter().map(|&c| ker.get(r, c).clone()).collect())
                .collect();
            dims[(m - w.lo) as usize] = chosen.len();
            reps.insert(m, Matrix::from_rows(f_in.field, chosen.len(), rows));
        }
        Ok(Homology {
            space: GradedSpace::new(w, dims),
            representatives: reps,
        })
    }
}

#[derive(Clone, Debug)]
pub struct KernelImage {
    pub kernel: GradedSpace,
    pub image: GradedSpace,
    /// Columns span the kernel, keyed by source degree.
    pub kernel_basis: BTreeMap<i64, Matrix>,
    /// Columns span the image, keyed by target degree.
    pub image_basis: BTreeMap<i64, Matrix>,
}

#[derive(Clone, Debug)]
pub struct Homology {
    pub space: GradedSpace,
    /// Columns are cycles whose classes form a basis, keyed by degree.
    pub representatives: BTreeMap<i64, Matrix>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(lo: i64, hi: i64) -> DegreeWindow {
        DegreeWindow::new(lo, hi).unwrap()
    }

    fn random_map(field: Field, seed: u64, space: &GradedSpace) -> GradedMap {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) % 7) as i64 - 3
        };
        let mut blocks = BTreeMap::new();
        for n in space.window().degrees() {
            let d = space.dim(n);
            let rows: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| next()).collect()).collect();
            if d > 0 {
                blocks.insert(n, Matrix::from_i64(field, &rows));
            }
        }
        GradedMap::new(field, space.clone(), space.clone(), 0, blocks).unwrap()
    }

    #[test]
    fn window_rejects_inverted_bounds() {
        assert!(DegreeWindow::new(3, 2).is_err());
        assert!(w(0, 2).interior(2).is_err());
        assert_eq!(w(0, 8).interior(2).unwrap(), w(2, 6));
    }

    #[test]
    fn identity_and_zero_composition() {
        let f = Field::Rational;
        let space = GradedSpace::from_fn(w(-2, 2), |n| (n + 3) as usize);
        let m = random_map(f, 7, &space);
        let id = GradedMap::identity(f, &space);
        assert_eq!(GradedMap::compose(&id, &m).unwrap(), m);
        let zero = GradedMap::zero(f, space.clone(), space.clone(), 0);
        assert!(GradedMap::compose(&zero, &m).unwrap().is_zero());
    }

    #[test]
    fn composition_is_associative() {
        let f = Field::Prime(10007);
        let space = GradedSpace::from_fn(w(0, 3), |n| (n % 3 + 1) as usize);
        let (a, b, c) = (random_map(f, 1, &space), random_map(f, 2, &space), random_map(f, 3, &space));
        let left = GradedMap::compose(&GradedMap::compose(&c, &b).unwrap(), &a).unwrap();
        let right = GradedMap::compose(&c, &GradedMap::compose(&b, &a).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn shape_mismatch_names_degree() {
        let f = Field::Rational;
        let a = GradedSpace::new(w(0, 1), vec![1, 1]);
        let b = GradedSpace::new(w(0, 1), vec![1, 2]);
        let g = GradedMap::zero(f, b.clone(), b, 0);
        let m = GradedMap::zero(f, a.clone(), a, 0);
        match GradedMap::compose(&g, &m) {
            Err(Error::ShapeMismatch { degree, .. }) => assert_eq!(degree, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kernel_image_of_identity_and_zero() {
        let f = Field::Rational;
        let space = GradedSpace::from_fn(w(-1, 2), |n| (n + 2) as usize);
        let ki = GradedMap::identity(f, &space).kernel_image();
        assert!(ki.kernel.is_zero_on(&space.window()));
        assert_eq!(ki.image, space);
        let ki = GradedMap::zero(f, space.clone(), space.clone(), 0).kernel_image();
        assert_eq!(ki.kernel, space);
        assert!(ki.image.is_zero_on(&space.window()));
    }

    #[test]
    fn homology_of_zero_maps_is_middle() {
        let f = Field::Rational;
        let space = GradedSpace::from_fn(w(0, 3), |_| 2);
        let z = GradedMap::zero(f, space.clone(), space.clone(), 0);
        let h = GradedMap::homology_at(&z, &z).unwrap();
        assert_eq!(h.space, space);
    }

    #[test]
    fn homology_detects_non_complex() {
        let f = Field::Rational;
        let space = GradedSpace::from_fn(w(0, 1), |_| 1);
        let id = GradedMap::identity(f, &space);
        assert_eq!(
            GradedMap::homology_at(&id, &id).unwrap_err(),
            Error::NotAComplex { degree: 0 }
        );
    }

    #[test]
    fn exact_short_sequence_has_zero_homology() {
        // 0 -> K -> K^2 -> K -> 0 at every degree
        let f = Field::Rational;
        let win = w(0, 2);
        let one = GradedSpace::from_fn(win, |_| 1);
        let two = GradedSpace::from_fn(win, |_| 2);
        let inc: BTreeMap<_, _> = win.degrees().map(|n| (n, Matrix::from_i64(f, &[vec![1], vec![1]]))).collect();
        let proj: BTreeMap<_, _> = win.degrees().map(|n| (n, Matrix::from_i64(f, &[vec![1, -1]]))).collect();
        let inc = GradedMap::new(f, one.clone(), two.clone(), 0, inc).unwrap();
        let proj = GradedMap::new(f, two, one, 0, proj).unwrap();
        let h = GradedMap::homology_at(&inc, &proj).unwrap();
        assert!(h.space.is_zero_on(&win));
    }
}
