//! Sets in `R^n`: fibered over a grid on a coordinate hyperplane, or as
//! voxel indicators, plus the tracking of balls through fold chains.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contraction::{dist_sq, Contraction, Fold, FoldChain};
use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::scalar::Scalar;
use crate::setmap::SetMap1D;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Ball<S: Scalar> {
    #[serde(with = "crate::io::scalar_vec")]
    pub center: Vec<S>,
    #[serde(with = "crate::io::scalar")]
    pub r: S,
}

impl<S: Scalar> Ball<S> {
    pub fn new(center: Vec<S>, r: S) -> Result<Self> {
        if r <= S::zero() {
            return Err(Error::InvalidParameter(format!(
                "ball radius {r} must be positive"
            )));
        }
        Ok(Ball { center, r })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }
}

/// Bodies that can be rasterized into a [`FiberedSet`] or a [`VoxelSet`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", bound = "")]
pub enum Shape<S: Scalar> {
    Ball {
        #[serde(with = "crate::io::scalar_vec")]
        center: Vec<S>,
        #[serde(with = "crate::io::scalar")]
        r: S,
    },
    Box {
        #[serde(with = "crate::io::scalar_vec")]
        lo: Vec<S>,
        #[serde(with = "crate::io::scalar_vec")]
        hi: Vec<S>,
    },
    /// Axis-aligned ellipsoid.
    Ellipsoid {
        #[serde(with = "crate::io::scalar_vec")]
        center: Vec<S>,
        #[serde(with = "crate::io::scalar_vec")]
        semi_axes: Vec<S>,
    },
}

impl<S: Scalar> Shape<S> {
    pub fn ball(b: &Ball<S>) -> Self {
        Shape::Ball {
            center: b.center.clone(),
            r: b.r.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Shape::Ball { center, .. } | Shape::Ellipsoid { center, .. } => center.len(),
            Shape::Box { lo, .. } => lo.len(),
        }
    }

    pub fn contains(&self, x: &[S]) -> bool {
        match self {
            Shape::Ball { center, r } => dist_sq(x, center) <= r.clone() * r.clone(),
            Shape::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (a, b))| a <= v && v <= b),
            Shape::Ellipsoid { center, semi_axes } => {
                let s = x.iter().zip(center.iter().zip(semi_axes)).fold(
                    S::zero(),
                    |acc, (v, (c, a))| {
                        let t = (v.clone() - c.clone()) / a.clone();
                        acc + t.clone() * t
                    },
                );
                s <= S::one()
            }
        }
    }

    pub fn volume(&self) -> f64 {
        let k = crate::contraction::kappa(self.dim());
        match self {
            Shape::Ball { r, .. } => k * r.as_f64().powi(self.dim() as i32),
            Shape::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(a, b)| (b.as_f64() - a.as_f64()).max(0.0))
                .product(),
            Shape::Ellipsoid { semi_axes, .. } => {
                k * semi_axes.iter().map(|a| a.as_f64()).product::<f64>()
            }
        }
    }

    /// Chord `{s : y + s e_axis ∈ shape}` over the base point `y` (the
    /// `axis` coordinate of `y` is ignored). Square roots are taken in
    /// `f64`; the chord is centered exactly on the shape's center.
    pub fn chord(&self, y: &[S], axis: usize) -> IntervalUnion<S> {
        match self {
            Shape::Ball { center, r } => {
                let off = y
                    .iter()
                    .zip(center)
                    .enumerate()
                    .filter(|(i, _)| *i != axis)
                    .fold(S::zero(), |acc, (_, (v, c))| {
                        acc + (v.clone() - c.clone()) * (v.clone() - c.clone())
                    });
                let rho2 = r.clone() * r.clone() - off;
                if rho2 <= S::zero() {
                    return IntervalUnion::empty();
                }
                let half = S::of_f64(rho2.as_f64().sqrt());
                IntervalUnion::interval(
                    center[axis].clone() - half.clone(),
                    center[axis].clone() + half,
                )
            }
            Shape::Box { lo, hi } => {
                let inside = (0..y.len())
                    .filter(|&i| i != axis)
                    .all(|i| lo[i] <= y[i] && y[i] <= hi[i]);
                if inside {
                    IntervalUnion::interval(lo[axis].clone(), hi[axis].clone())
                } else {
                    IntervalUnion::empty()
                }
            }
            Shape::Ellipsoid { center, semi_axes } => {
                let s = (0..y.len())
                    .filter(|&i| i != axis)
                    .fold(S::zero(), |acc, i| {
                        let t = (y[i].clone() - center[i].clone()) / semi_axes[i].clone();
                        acc + t.clone() * t
                    });
                let rest = S::one() - s;
                if rest <= S::zero() {
                    return IntervalUnion::empty();
                }
                let half = S::of_f64(semi_axes[axis].as_f64() * rest.as_f64().sqrt());
                IntervalUnion::interval(
                    center[axis].clone() - half.clone(),
                    center[axis].clone() + half,
                )
            }
        }
    }
}

/// Uniform grid of cells of side `h` starting at `lo`; cell `i` has center
/// `lo + (i + 1/2) h` in every coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GridSpec<S: Scalar> {
    #[serde(with = "crate::io::scalar_vec")]
    pub lo: Vec<S>,
    #[serde(with = "crate::io::scalar")]
    pub h: S,
    pub counts: Vec<usize>,
}

impl<S: Scalar> GridSpec<S> {
    pub fn new(lo: Vec<S>, h: S, counts: Vec<usize>) -> Result<Self> {
        if h <= S::zero() || lo.len() != counts.len() {
            return Err(Error::InvalidParameter(
                "grid needs h > 0 and one count per axis".into(),
            ));
        }
        Ok(GridSpec { lo, h, counts })
    }

    /// Grid of side `h` covering the cube `[-half_width, half_width]^dim`.
    pub fn centered(dim: usize, half_width: S, h: S) -> Result<Self> {
        let cells = ((half_width.clone() + half_width.clone()) / h.clone())
            .floor_i64()
            .max(1) as usize;
        let lo = vec![-half_width; dim];
        Self::new(lo, h, vec![cells; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn center(&self, cell: &[usize]) -> Vec<S> {
        cell.iter()
            .zip(&self.lo)
            .map(|(&i, lo)| lo.clone() + (S::from_int(i as i64) + S::one().half()) * self.h.clone())
            .collect()
    }

    /// All cell indices, first coordinate fastest.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.len());
        for mut idx in 0..self.len() {
            let mut cell = Vec::with_capacity(self.dim());
            for &c in &self.counts {
                cell.push(idx % c);
                idx /= c;
            }
            out.push(cell);
        }
        out
    }

    pub fn linear_index(&self, cell: &[usize]) -> usize {
        cell.iter()
            .zip(&self.counts)
            .rev()
            .fold(0, |acc, (&i, &c)| acc * c + i)
    }

    /// Cell whose center is exactly `x`, if any.
    pub fn cell_of_center(&self, x: &[S]) -> Option<Vec<usize>> {
        x.iter()
            .zip(self.lo.iter().zip(&self.counts))
            .map(|(v, (lo, &c))| {
                let t = (v.clone() - lo.clone()) / self.h.clone() - S::one().half();
                if !t.is_integer_valued() {
                    return None;
                }
                let i = (t + S::one().half()).floor_i64();
                (0..c as i64).contains(&i).then_some(i as usize)
            })
            .collect()
    }
}

/// A set in `R^n` stored as exact fibers along the coordinate axis `axis`
/// over the centers of a grid on the remaining `n - 1` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberedSet<S: Scalar> {
    pub axis: usize,
    pub grid: GridSpec<S>,
    /// Nonempty fibers, keyed by base cell.
    pub fibers: BTreeMap<Vec<usize>, IntervalUnion<S>>,
}

impl<S: Scalar> FiberedSet<S> {
    pub fn empty(axis: usize, grid: GridSpec<S>) -> Self {
        FiberedSet {
            axis,
            grid,
            fibers: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.grid.dim() + 1
    }

    pub fn from_fibers(
        axis: usize,
        grid: GridSpec<S>,
        fibers: impl IntoIterator<Item = (Vec<usize>, IntervalUnion<S>)>,
    ) -> Self {
        let fibers = fibers.into_iter().filter(|(_, f)| !f.is_empty()).collect();
        FiberedSet { axis, grid, fibers }
    }

    pub fn fiber(&self, cell: &[usize]) -> IntervalUnion<S> {
        self.fibers.get(cell).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }

    /// Point of `R^n` over base cell `cell` with axis coordinate `s`.
    pub fn lift(&self, cell: &[usize], s: S) -> Vec<S> {
        let mut base = self.grid.center(cell);
        base.insert(self.axis, s);
        base
    }

    /// `h^(n-1) · Σ |fiber|`.
    pub fn volume(&self) -> S {
        let cell = self.grid.h.pow_u(self.grid.dim() as u32);
        self.fibers
            .values()
            .fold(S::zero(), |acc, f| acc + f.measure())
            * cell
    }

    pub fn map_fibers(
        &self,
        f: impl Fn(&IntervalUnion<S>) -> Result<IntervalUnion<S>> + Sync,
    ) -> Result<Self> {
        let entries: Vec<_> = self.fibers.iter().collect();
        let mapped: Result<Vec<_>> = entries
            .par_iter()
            .map(|(k, v)| Ok(((*k).clone(), f(v)?)))
            .collect();
        Ok(Self::from_fibers(self.axis, self.grid.clone(), mapped?))
    }

    pub fn same_layout(&self, other: &Self) -> bool {
        self.axis == other.axis && self.grid == other.grid
    }
}

/// Rasterizes `shape` into fibers along `axis` over the base grid `grid`
/// (which has one axis fewer than the shape).
pub fn fibered_from_shape<S: Scalar>(
    shape: &Shape<S>,
    grid: &GridSpec<S>,
    axis: usize,
) -> Result<FiberedSet<S>> {
    if grid.dim() + 1 != shape.dim() || axis >= shape.dim() {
        return Err(Error::InvalidDimension(shape.dim()));
    }
    let cells = grid.cells();
    let fibers: Vec<_> = cells
        .into_par_iter()
        .map(|cell| {
            let mut y = grid.center(&cell);
            y.insert(axis, S::zero());
            let chord = shape.chord(&y, axis);
            (cell, chord)
        })
        .collect();
    Ok(FiberedSet::from_fibers(axis, grid.clone(), fibers))
}

/// Applies a 1-D set map to every fiber; the map's center is a value of
/// the axis coordinate.
pub fn apply_fiberwise<S: Scalar>(s: &FiberedSet<S>, map: &SetMap1D<S>) -> Result<FiberedSet<S>> {
    s.map_fibers(|f| map.apply(f))
}

/// `h^(n-1) · Σ_cells |fiber_a Δ fiber_b|`.
pub fn symdiff_volume<S: Scalar>(a: &FiberedSet<S>, b: &FiberedSet<S>) -> Result<S> {
    if !a.same_layout(b) {
        return Err(Error::GridMismatch);
    }
    let keys: BTreeSet<&Vec<usize>> = a.fibers.keys().chain(b.fibers.keys()).collect();
    let total = keys.into_iter().fold(S::zero(), |acc, k| {
        acc + a.fiber(k).symdiff_measure(&b.fiber(k))
    });
    Ok(total * a.grid.h.pow_u(a.grid.dim() as u32))
}

/// Image of a ball under a fold chain. Each polarization maps a ball to a
/// ball of the same radius centered at the image of the center.
pub fn ball_track<S: Scalar>(chain: &FoldChain<S>, b: &Ball<S>) -> Ball<S> {
    Ball {
        center: chain.apply(&b.center),
        r: b.r.clone(),
    }
}

/// Mirror image of `b` in the hyperplane of `fold`.
pub fn reflect_ball<S: Scalar>(fold: &Fold<S>, b: &Ball<S>) -> Ball<S> {
    Ball {
        center: fold.reflect(&b.center),
        r: b.r.clone(),
    }
}

/// `chain(B) = chain(B†)` exactly, where `B†` is the reflection of `b` in
/// the first hyperplane of the chain.
pub fn markuslem_check<S: Scalar>(chain: &FoldChain<S>, b: &Ball<S>) -> Result<bool> {
    let first = chain
        .folds
        .first()
        .ok_or_else(|| Error::InvalidParameter("chain must be nonempty".into()))?;
    Ok(ball_track(chain, b) == ball_track(chain, &reflect_ball(first, b)))
}

/// Does `psi` separate `b` from its mirror image in `plane`? Any chain whose
/// first fold is `plane` identifies the two, so a separating map is not
/// reproduced by such chains.
pub fn separates_mirror_pair<S: Scalar, C: Contraction<S>>(
    psi: &C,
    plane: &Fold<S>,
    b: &Ball<S>,
) -> bool {
    psi.apply(&b.center) != psi.apply(&plane.reflect(&b.center))
}

/// Occupancy bitmap over the voxels of a uniform grid; voxel `i` has center
/// `origin + (i + 1/2) h`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelSet<S: Scalar> {
    pub grid: GridSpec<S>,
    pub occupied: Vec<bool>,
}

impl<S: Scalar> VoxelSet<S> {
    pub fn empty(grid: GridSpec<S>) -> Self {
        let n = grid.len();
        VoxelSet {
            grid,
            occupied: vec![false; n],
        }
    }

    pub fn from_shape(shape: &Shape<S>, grid: GridSpec<S>) -> Self {
        let occupied = grid
            .cells()
            .par_iter()
            .map(|c| shape.contains(&grid.center(c)))
            .collect();
        VoxelSet { grid, occupied }
    }

    pub fn from_predicate(grid: GridSpec<S>, pred: impl Fn(&[S]) -> bool + Sync) -> Self {
        let occupied = grid
            .cells()
            .par_iter()
            .map(|c| pred(&grid.center(c)))
            .collect();
        VoxelSet { grid, occupied }
    }

    pub fn count(&self) -> usize {
        self.occupied.iter().filter(|b| **b).count()
    }

    pub fn contains_cell(&self, cell: &[usize]) -> bool {
        self.occupied[self.grid.linear_index(cell)]
    }

    pub fn volume(&self) -> S {
        S::from_int(self.count() as i64) * self.grid.h.pow_u(self.grid.dim() as u32)
    }
}

/// Polarization of a voxel set in the hyperplane of `fold`, evaluated on
/// voxel centers. The reflection must map the grid onto itself.
pub fn voxel_polarize<S: Scalar>(v: &VoxelSet<S>, fold: &Fold<S>) -> Result<VoxelSet<S>> {
    if fold.dim() != v.grid.dim() {
        return Err(Error::InvalidDimension(fold.dim()));
    }
    let cells = v.grid.cells();
    let mirror: Option<Vec<usize>> = cells
        .par_iter()
        .map(|c| {
            v.grid
                .cell_of_center(&fold.reflect(&v.grid.center(c)))
                .map(|m| v.grid.linear_index(&m))
        })
        .collect();
    let mirror = mirror.ok_or(Error::GridIncompatibleFold)?;
    let occupied = cells
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let (here, there) = (v.occupied[i], v.occupied[mirror[i]]);
            if fold.on_positive_side(&v.grid.center(c)) {
                here || there
            } else {
                here && there
            }
        })
        .collect();
    Ok(VoxelSet {
        grid: v.grid.clone(),
        occupied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::StructuredMap;
    use crate::scalar::q;
    use crate::setmap::{polarize, Orientation};
    use num_rational::BigRational;
    use num_traits::Signed;
    use std::f64::consts::PI;

    type Q = BigRational;

    fn unit_ball_2d(cy: Q) -> Shape<Q> {
        Shape::Ball {
            center: vec![q(0, 1), cy],
            r: q(1, 1),
        }
    }

    fn base_grid(h: i64) -> GridSpec<Q> {
        GridSpec::new(vec![q(-1, 1)], q(1, h), vec![2 * h as usize]).unwrap()
    }

    #[test]
    fn rasterized_disk_area() {
        let s = fibered_from_shape(&unit_ball_2d(q(0, 1)), &base_grid(64), 1).unwrap();
        let v = s.volume().as_f64();
        assert!((v - PI).abs() / PI < 0.01, "{v}");
    }

    #[test]
    fn box_volume_is_exact() {
        let shape = Shape::Box {
            lo: vec![q(0, 1), q(0, 1)],
            hi: vec![q(1, 1), q(1, 1)],
        };
        let grid = GridSpec::new(vec![q(0, 1)], q(1, 8), vec![8]).unwrap();
        assert_eq!(
            fibered_from_shape(&shape, &grid, 1).unwrap().volume(),
            q(1, 1)
        );
        let far = GridSpec::new(vec![q(5, 1)], q(1, 8), vec![8]).unwrap();
        assert!(fibered_from_shape(&shape, &far, 1).unwrap().is_empty());
    }

    #[test]
    fn steiner_keeps_volume_exactly() {
        let s = fibered_from_shape(&unit_ball_2d(q(3, 4)), &base_grid(16), 1).unwrap();
        let t = apply_fiberwise(&s, &SetMap1D::steiner(q(0, 1))).unwrap();
        assert_eq!(s.volume(), t.volume());
    }

    #[test]
    fn solynin_and_brock_move_rasterized_balls() {
        let grid = base_grid(16);
        let s = fibered_from_shape(&unit_ball_2d(q(-2, 1)), &grid, 1).unwrap();
        let so = SetMap1D::solynin(q(0, 1), Orientation::Positive);
        let image = apply_fiberwise(&s, &so).unwrap();
        let psi = StructuredMap::unit(so, vec![q(0, 1), q(1, 1)]).unwrap();
        let moved = psi.apply(&[q(0, 1), q(-2, 1)]);
        let expected = fibered_from_shape(&unit_ball_2d(moved[1].clone()), &grid, 1).unwrap();
        assert_eq!(symdiff_volume(&image, &expected).unwrap(), q(0, 1));

        let s = fibered_from_shape(&unit_ball_2d(q(2, 1)), &grid, 1).unwrap();
        let image = apply_fiberwise(&s, &SetMap1D::brock(q(0, 1), q(1, 2)).unwrap()).unwrap();
        let expected = fibered_from_shape(&unit_ball_2d(q(1, 1)), &grid, 1).unwrap();
        assert_eq!(symdiff_volume(&image, &expected).unwrap(), q(0, 1));
    }

    #[test]
    fn symdiff_of_disjoint_translates() {
        let grid = base_grid(8);
        let a = fibered_from_shape(&unit_ball_2d(q(0, 1)), &grid, 1).unwrap();
        let b = fibered_from_shape(&unit_ball_2d(q(5, 1)), &grid, 1).unwrap();
        assert_eq!(symdiff_volume(&a, &b).unwrap(), a.volume() + b.volume());
        assert_eq!(symdiff_volume(&a, &a).unwrap(), q(0, 1));
        let other = fibered_from_shape(&unit_ball_2d(q(0, 1)), &base_grid(4), 1).unwrap();
        assert!(matches!(
            symdiff_volume(&a, &other),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn ball_track_basics() {
        let b = Ball::new(vec![q(1, 1), q(2, 1)], q(1, 2)).unwrap();
        assert_eq!(ball_track(&FoldChain::identity(), &b), b);
        let up = FoldChain::new(vec![Fold::axis(2, 1, q(0, 1), Orientation::Positive)]);
        assert_eq!(ball_track(&up, &b), b);
        let down = FoldChain::new(vec![Fold::axis(2, 1, q(3, 1), Orientation::Positive)]);
        assert_eq!(ball_track(&down, &b).center, vec![q(1, 1), q(4, 1)]);
        assert!(markuslem_check(&down, &b).unwrap());
        assert!(markuslem_check(&FoldChain::identity(), &b).is_err());
    }

    #[test]
    fn solynin_separates_the_documented_pair() {
        let plane = Fold::axis(2, 1, q(0, 1), Orientation::Positive);
        let b = Ball::new(vec![q(0, 1), q(1, 1)], q(1, 2)).unwrap();
        let so = StructuredMap::unit(
            SetMap1D::solynin(q(0, 1), Orientation::Positive),
            vec![q(0, 1), q(1, 1)],
        )
        .unwrap();
        assert!(separates_mirror_pair(&so, &plane, &b));
        assert!(!separates_mirror_pair(&plane, &plane, &b));
    }

    fn voxel_grid() -> GridSpec<Q> {
        GridSpec::new(vec![q(-1, 1), q(-1, 1)], q(1, 8), vec![16, 16]).unwrap()
    }

    #[test]
    fn voxel_polarize_basics() {
        let grid = voxel_grid();
        let fold = Fold::axis(2, 1, q(0, 1), Orientation::Positive);
        let upper = VoxelSet::from_predicate(grid.clone(), |x| x[1] > q(1, 3));
        assert_eq!(voxel_polarize(&upper, &fold).unwrap(), upper);
        let pair =
            VoxelSet::from_predicate(grid.clone(), |x| x[1].abs() > q(1, 2) && x[0] < q(0, 1));
        assert_eq!(voxel_polarize(&pair, &fold).unwrap(), pair);
        let diag = Fold::new(vec![q(1, 1), q(-1, 1)], q(0, 1), Orientation::Positive).unwrap();
        let blob = VoxelSet::from_shape(
            &Shape::Ball {
                center: vec![q(-1, 2), q(1, 4)],
                r: q(1, 3),
            },
            grid.clone(),
        );
        let p = voxel_polarize(&blob, &diag).unwrap();
        assert_eq!(p.count(), blob.count());
        assert_eq!(voxel_polarize(&p, &diag).unwrap(), p);
        let off = Fold::axis(2, 1, q(1, 16), Orientation::Positive);
        assert!(matches!(
            voxel_polarize(&blob, &off),
            Err(Error::GridIncompatibleFold)
        ));
    }

    #[test]
    fn voxel_polarize_matches_columnwise_oracle() {
        // rows span [-3/4, 5/4], symmetric about the fold level 1/4
        let grid = GridSpec::new(vec![q(-1, 1), q(-3, 4)], q(1, 8), vec![16, 16]).unwrap();
        let c = q(1, 4);
        let fold = Fold::axis(2, 1, c.clone(), Orientation::Positive);
        let v = VoxelSet::from_predicate(grid.clone(), |x| {
            x[1].clone() + x[0].clone() * q(1, 2) < q(-1, 5)
        });
        let p = voxel_polarize(&v, &fold).unwrap();
        let h = grid.h.clone();
        for i in 0..16 {
            let column =
                IntervalUnion::from_pairs((0..16).filter(|&j| v.contains_cell(&[i, j])).map(|j| {
                    let y = grid.center(&[i, j])[1].clone();
                    (y.clone() - h.half(), y + h.half())
                }));
            let polarized = polarize(&column, &c, Orientation::Positive);
            for j in 0..16 {
                let y = grid.center(&[i, j])[1].clone();
                assert_eq!(
                    p.contains_cell(&[i, j]),
                    polarized.contains(&y),
                    "i={i} j={j}"
                );
            }
        }
    }
}
