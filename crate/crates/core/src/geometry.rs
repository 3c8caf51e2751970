//! Exact geometry of finite point sets in the nonnegative orthant.
//!
//! Everything here is a pure function of immutable values. Points are exponent
//! vectors; a [`PointConfiguration`] is always sorted and free of duplicates so
//! it can serve directly as a hash key.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GameError, Result};
use crate::lp;
use crate::scalar::Scalar;

/// Largest supported ambient dimension (subsets are stored as bitmasks).
pub const MAX_DIM: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Scalar>);

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&v| Scalar::from(v)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> Scalar {
        self.0.iter().fold(Scalar::ZERO, |acc, v| acc.add(v))
    }

    /// Componentwise `self <= other`.
    pub fn le_all(&self, other: &Point) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    /// Bitmask of coordinates with a positive entry.
    pub fn support(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_positive())
            .fold(0, |m, (j, _)| m | (1 << j))
    }

    pub(crate) fn coords_mut(&mut self) -> &mut Vec<Scalar> {
        &mut self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (j, v) in self.0.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A nonempty, deduplicated, lexicographically sorted set of points of one
/// dimension, all in the nonnegative orthant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointConfiguration {
    dim: usize,
    points: Vec<Point>,
}

impl PointConfiguration {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(GameError::InvalidConfiguration("empty point set".into()));
        };
        let dim = first.dim();
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(GameError::InvalidConfiguration(format!(
                "dimension {dim} outside 2..={MAX_DIM}"
            )));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(GameError::InvalidConfiguration(format!(
                    "point {p} has dimension {} but expected {dim}",
                    p.dim()
                )));
            }
            if p.coords().iter().any(Scalar::is_negative) {
                return Err(GameError::InvalidConfiguration(format!(
                    "point {p} has a negative coordinate"
                )));
            }
        }
        Ok(Self::canonical(dim, points))
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(rows.iter().map(|r| Point::from_i64(r.as_ref())).collect())
    }

    /// Sorts and deduplicates without re-validating.
    pub(crate) fn canonical(dim: usize, mut points: Vec<Point>) -> Self {
        points.sort_unstable();
        points.dedup();
        PointConfiguration { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.points.len() == 1
    }

    pub fn is_integral(&self) -> bool {
        self.points
            .iter()
            .all(|p| p.coords().iter().all(Scalar::is_integer))
    }

    /// Multiplies every coordinate by `factor`.
    pub fn scaled(&self, factor: &Scalar) -> Self {
        let points = self
            .points
            .iter()
            .map(|p| Point(p.coords().iter().map(|v| v.mul(factor)).collect()))
            .collect();
        Self::canonical(self.dim, points)
    }
}

impl fmt::Display for PointConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PointConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A nonempty set of 0-based coordinate indices, stored as a bitmask.
///
/// Ordered by size first and then lexicographically by index list, which is
/// the order in which legal host moves are enumerated.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoordinateSubset(u32);

impl CoordinateSubset {
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut mask = 0u32;
        for i in indices {
            if i >= MAX_DIM {
                return Err(GameError::IllegalMove(format!(
                    "coordinate {i} out of range"
                )));
            }
            mask |= 1 << i;
        }
        if mask == 0 {
            return Err(GameError::IllegalMove("empty coordinate subset".into()));
        }
        Ok(CoordinateSubset(mask))
    }

    pub fn from_mask(mask: u32) -> Option<Self> {
        (mask != 0).then_some(CoordinateSubset(mask))
    }

    /// `{0, .., dim-1}`.
    pub fn full(dim: usize) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&dim));
        CoordinateSubset(if dim == 32 {
            u32::MAX
        } else {
            (1u32 << dim) - 1
        })
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_DIM && self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..MAX_DIM).filter(move |&i| self.0 & (1 << i) != 0)
    }

    pub fn min(self) -> usize {
        self.0.trailing_zeros() as usize
    }

    pub fn max(self) -> usize {
        (31 - self.0.leading_zeros()) as usize
    }

    pub fn fits(self, dim: usize) -> bool {
        self.max() < dim
    }

    pub fn with(self, i: usize) -> Self {
        CoordinateSubset(self.0 | (1 << i))
    }
}

impl Ord for CoordinateSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for CoordinateSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CoordinateSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for CoordinateSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for CoordinateSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.indices())
    }
}

impl<'de> Deserialize<'de> for CoordinateSubset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        CoordinateSubset::from_indices(indices).map_err(serde::de::Error::custom)
    }
}

/// All subsets of `{0, .., dim-1}` with exactly `size` elements, in
/// lexicographic order of their index lists.
pub fn subsets_of_size(dim: usize, size: usize) -> Vec<CoordinateSubset> {
    fn rec(dim: usize, start: usize, left: usize, mask: u32, out: &mut Vec<CoordinateSubset>) {
        if left == 0 {
            out.push(CoordinateSubset(mask));
            return;
        }
        for i in start..=dim - left {
            rec(dim, i + 1, left - 1, mask | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if size == 0 || size > dim {
        return out;
    }
    rec(dim, 0, size, 0, &mut out);
    out
}

/// Drops every point that has another point componentwise below it.
pub fn remove_dominated(config: &PointConfiguration) -> PointConfiguration {
    let pts = config.points();
    let keep: Vec<Point> = pts
        .iter()
        .enumerate()
        .filter(|(i, p)| !pts.iter().enumerate().any(|(j, q)| j != *i && q.le_all(p)))
        .map(|(_, p)| p.clone())
        .collect();
    // Filtering a sorted deduplicated list keeps it canonical.
    PointConfiguration {
        dim: config.dim,
        points: keep,
    }
}

/// Translates the set so that every coordinate hyperplane is touched.
pub fn shift_to_axes(config: &PointConfiguration) -> PointConfiguration {
    let mut mins: Vec<Scalar> = config.points[0].coords().to_vec();
    for p in &config.points[1..] {
        for (m, v) in mins.iter_mut().zip(p.coords()) {
            if v < m {
                *m = v.clone();
            }
        }
    }
    if mins.iter().all(Scalar::is_zero) {
        return config.clone();
    }
    let points = config
        .points
        .iter()
        .map(|p| {
            Point(
                p.coords()
                    .iter()
                    .zip(&mins)
                    .map(|(v, m)| v.sub(m))
                    .collect(),
            )
        })
        .collect();
    // Translation preserves order and distinctness.
    PointConfiguration {
        dim: config.dim,
        points,
    }
}

/// Moves the set along `-(1, .., 1)` by the largest integer amount that keeps
/// every point in the nonnegative orthant.
pub fn diagonal_shift(config: &PointConfiguration) -> PointConfiguration {
    let t = config
        .points
        .iter()
        .flat_map(|p| p.coords().iter())
        .min()
        .expect("nonempty configuration")
        .floor();
    if t.is_zero() {
        return config.clone();
    }
    let points = config
        .points
        .iter()
        .map(|p| Point(p.coords().iter().map(|v| v.sub(&t)).collect()))
        .collect();
    PointConfiguration {
        dim: config.dim,
        points,
    }
}

/// Whether `target` lies in `conv(others) + R^n_+`, decided by exact LP.
pub fn in_positive_hull(target: &Point, others: &[&Point]) -> bool {
    if others.is_empty() {
        return false;
    }
    let n = target.dim();
    let m = others.len();
    // Columns: lambda_q for each q, then a slack per coordinate.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(n + 1);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut row = Vec::with_capacity(m + n);
        row.extend(others.iter().map(|q| q.coords()[j].to_ratio()));
        row.extend((0..n).map(|s| {
            if s == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
        rows.push(row);
        rhs.push(target.coords()[j].to_ratio());
    }
    let mut convex = vec![BigRational::one(); m];
    convex.extend((0..n).map(|_| BigRational::zero()));
    rows.push(convex);
    rhs.push(BigRational::one());
    lp::feasible(&rows, &rhs)
}

/// Vertices of the Newton polyhedron `conv(S) + R^n_+`.
pub fn newton_vertices(config: &PointConfiguration) -> PointConfiguration {
    let candidates = remove_dominated(config);
    if candidates.len() <= 2 {
        return candidates;
    }
    let pts = candidates.points();
    let keep: Vec<Point> = pts
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            let others: Vec<&Point> = pts
                .iter()
                .enumerate()
                .filter(|(j, _)| j != i)
                .map(|(_, q)| q)
                .collect();
            !in_positive_hull(p, &others)
        })
        .map(|(_, p)| p.clone())
        .collect();
    PointConfiguration {
        dim: config.dim,
        points: keep,
    }
}

/// Componentwise spread `max_p p_j - min_p p_j`.
pub fn spread_vector(config: &PointConfiguration) -> Vec<Scalar> {
    (0..config.dim)
        .map(|j| {
            let col = config.points.iter().map(|p| &p.coords()[j]);
            let max = col.clone().max().expect("nonempty");
            let min = col.min().expect("nonempty");
            max.sub(min)
        })
        .collect()
}

/// Difference `P - Q` of the two Newton vertices closest to being
/// comparable, i.e. minimizing `max(P - Q) - min(P - Q)`; the first pair in
/// vertex order wins ties. `None` when there is a single vertex.
///
/// Distinct vertices are incomparable, so the result always has a negative
/// and a positive component.
pub fn characteristic_vector(config: &PointConfiguration) -> Option<Vec<Scalar>> {
    let vertices = newton_vertices(config);
    let pts = vertices.points();
    let mut best: Option<(Scalar, Vec<Scalar>)> = None;
    for (a, p) in pts.iter().enumerate() {
        for q in &pts[a + 1..] {
            let w: Vec<Scalar> = p
                .coords()
                .iter()
                .zip(q.coords())
                .map(|(x, y)| x.sub(y))
                .collect();
            let width = w
                .iter()
                .max()
                .expect("dim >= 2")
                .sub(w.iter().min().expect("dim >= 2"));
            if best.as_ref().is_none_or(|(b, _)| width < *b) {
                best = Some((width, w));
            }
        }
    }
    best.map(|(_, w)| w)
}

/// All hitting sets of minimum cardinality for the Newton vertices of
/// `config`, in lexicographic order.
pub fn minimal_hitting_sets(config: &PointConfiguration) -> Result<Vec<CoordinateSubset>> {
    let vertices = newton_vertices(config);
    let supports: Vec<u32> = vertices.points().iter().map(Point::support).collect();
    if supports.contains(&0) {
        return Err(GameError::NoHittingSet);
    }
    for size in 1..=config.dim {
        let hits: Vec<CoordinateSubset> = subsets_of_size(config.dim, size)
            .into_iter()
            .filter(|s| supports.iter().all(|&sup| sup & s.0 != 0))
            .collect();
        if !hits.is_empty() {
            return Ok(hits);
        }
    }
    unreachable!("the full coordinate set hits every nonzero vertex")
}
