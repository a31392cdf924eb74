use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{IdealsError, StepFunction};

/// Coordinate a graph region is a function of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    /// Row-wise: `i` compared against `f(j)`.
    J,
    /// Column-wise: `j` compared against `f(i)`.
    I,
}

/// Finite or cofinite subset of `ℕ = {1, 2, …}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisSet {
    Finite(BTreeSet<u64>),
    /// Everything except the listed values.
    Cofinite(BTreeSet<u64>),
}

impl AxisSet {
    pub fn all() -> Self {
        AxisSet::Cofinite(BTreeSet::new())
    }

    /// `{1, …, n}`.
    pub fn up_to(n: u64) -> Self {
        AxisSet::Finite((1..=n).collect())
    }

    pub fn contains(&self, x: u64) -> bool {
        match self {
            AxisSet::Finite(s) => s.contains(&x),
            AxisSet::Cofinite(s) => x >= 1 && !s.contains(&x),
        }
    }

    pub fn complement(&self) -> AxisSet {
        match self {
            AxisSet::Finite(s) => AxisSet::Cofinite(s.clone()),
            AxisSet::Cofinite(s) => AxisSet::Finite(s.clone()),
        }
    }

    pub fn intersect(&self, other: &AxisSet) -> AxisSet {
        match (self, other) {
            (AxisSet::Finite(a), AxisSet::Finite(b)) => AxisSet::Finite(a.intersection(b).copied().collect()),
            (AxisSet::Finite(a), AxisSet::Cofinite(b)) | (AxisSet::Cofinite(b), AxisSet::Finite(a)) => {
                AxisSet::Finite(a.difference(b).copied().collect())
            }
            (AxisSet::Cofinite(a), AxisSet::Cofinite(b)) => AxisSet::Cofinite(a.union(b).copied().collect()),
        }
    }

    fn values(&self) -> &BTreeSet<u64> {
        match self {
            AxisSet::Finite(s) | AxisSet::Cofinite(s) => s,
        }
    }
}

/// One constraint on a point `(i, j)` of `ℕ²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Literal {
    Points(BTreeSet<(u64, u64)>),
    /// Every point except the listed ones.
    CoPoints(BTreeSet<(u64, u64)>),
    /// `i ∈ A` and `j ∈ B`.
    Rect(AxisSet, AxisSet),
    /// `i ≤ f(j)` for [`Coord::J`], `j ≤ f(i)` for [`Coord::I`].
    Under(StepFunction, Coord),
    /// `i ≥ f(j)` for [`Coord::J`], `j ≥ f(i)` for [`Coord::I`].
    Above(StepFunction, Coord),
}

impl Literal {
    pub fn contains(&self, i: u64, j: u64) -> bool {
        let graph = |c: Coord| match c {
            Coord::J => (i, j),
            Coord::I => (j, i),
        };
        match self {
            Literal::Points(p) => p.contains(&(i, j)),
            Literal::CoPoints(p) => !p.contains(&(i, j)),
            Literal::Rect(a, b) => a.contains(i) && b.contains(j),
            Literal::Under(f, c) => {
                let (x, arg) = graph(*c);
                x <= f.eval(arg)
            }
            Literal::Above(f, c) => {
                let (x, arg) = graph(*c);
                x >= f.eval(arg)
            }
        }
    }

    /// Complement as a union of literals.
    fn complement(&self) -> Vec<Literal> {
        match self {
            Literal::Points(p) => vec![Literal::CoPoints(p.clone())],
            Literal::CoPoints(p) => vec![Literal::Points(p.clone())],
            Literal::Rect(a, b) => vec![
                Literal::Rect(a.complement(), AxisSet::all()),
                Literal::Rect(AxisSet::all(), b.complement()),
            ],
            Literal::Under(f, c) => vec![Literal::Above(f.plus(1), *c)],
            Literal::Above(f, c) => vec![Literal::Under(f.saturating_minus(1), *c)],
        }
    }

    fn transpose(&self) -> Literal {
        let swap = |p: &BTreeSet<(u64, u64)>| p.iter().map(|&(i, j)| (j, i)).collect();
        let flip = |c: &Coord| match c {
            Coord::J => Coord::I,
            Coord::I => Coord::J,
        };
        match self {
            Literal::Points(p) => Literal::Points(swap(p)),
            Literal::CoPoints(p) => Literal::CoPoints(swap(p)),
            Literal::Rect(a, b) => Literal::Rect(b.clone(), a.clone()),
            Literal::Under(f, c) => Literal::Under(f.clone(), flip(c)),
            Literal::Above(f, c) => Literal::Above(f.clone(), flip(c)),
        }
    }

    /// Same set with any graph region expressed over `target`, when possible.
    fn reoriented(&self, target: Coord) -> Option<Literal> {
        match self {
            Literal::Under(f, c) if *c != target => Some(Literal::Above(f.inverse_shift()?, target)),
            Literal::Above(f, c) if *c != target => Some(Literal::Under(f.inverse_shift()?, target)),
            l => Some(l.clone()),
        }
    }

    fn coord(&self) -> Option<Coord> {
        match self {
            Literal::Under(_, c) | Literal::Above(_, c) => Some(*c),
            _ => None,
        }
    }
}

/// Finite union of intersections of [`Literal`]s: a subset of `ℕ²` with
/// decidable membership, emptiness, finiteness and row/column extremes.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SemilinearSet {
    terms: Vec<Vec<Literal>>,
}

/// What one row (or column) of a set looks like.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Line {
    Empty,
    Finite { min: u64, max: u64 },
    Infinite { min: u64 },
}

impl Line {
    fn merge(self, other: Line) -> Line {
        use Line::*;
        match (self, other) {
            (Empty, x) | (x, Empty) => x,
            (Finite { min: a, max: b }, Finite { min: c, max: d }) => Finite { min: a.min(c), max: b.max(d) },
            (Infinite { min: a }, Finite { min: b, .. })
            | (Finite { min: a, .. }, Infinite { min: b })
            | (Infinite { min: a }, Infinite { min: b }) => Infinite { min: a.min(b) },
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Line::Empty)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Line::Infinite { .. })
    }
}

/// Which extreme of each row (or column) to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extreme {
    Min,
    Max,
}

impl SemilinearSet {
    pub fn empty() -> Self {
        SemilinearSet { terms: vec![] }
    }

    /// All of `ℕ²`.
    pub fn full() -> Self {
        SemilinearSet { terms: vec![vec![]] }
    }

    pub fn literal(l: Literal) -> Self {
        SemilinearSet { terms: vec![vec![l]] }
    }

    pub fn points(pts: impl IntoIterator<Item = (u64, u64)>) -> Self {
        SemilinearSet::literal(Literal::Points(pts.into_iter().collect()))
    }

    pub fn rect(a: AxisSet, b: AxisSet) -> Self {
        SemilinearSet::literal(Literal::Rect(a, b))
    }

    /// `ℕ × {1, …, j}`.
    pub fn first_rows(j: u64) -> Self {
        SemilinearSet::rect(AxisSet::all(), AxisSet::up_to(j))
    }

    /// `{1, …, i} × ℕ`.
    pub fn first_columns(i: u64) -> Self {
        SemilinearSet::rect(AxisSet::up_to(i), AxisSet::all())
    }

    /// `{(i, j) : i ≤ f(j)}`.
    pub fn under_rows(f: StepFunction) -> Self {
        SemilinearSet::literal(Literal::Under(f, Coord::J))
    }

    /// `{(i, j) : j ≤ f(i)}`.
    pub fn under_columns(f: StepFunction) -> Self {
        SemilinearSet::literal(Literal::Under(f, Coord::I))
    }

    /// `{(n, n)}`.
    pub fn diagonal() -> Self {
        let id = StepFunction::identity();
        SemilinearSet { terms: vec![vec![Literal::Under(id.clone(), Coord::J), Literal::Above(id, Coord::J)]] }
    }

    pub fn terms(&self) -> &[Vec<Literal>] {
        &self.terms
    }

    pub fn from_terms(terms: Vec<Vec<Literal>>) -> Self {
        SemilinearSet { terms }
    }

    pub fn contains(&self, i: u64, j: u64) -> bool {
        i >= 1 && j >= 1 && self.terms.iter().any(|t| t.iter().all(|l| l.contains(i, j)))
    }

    pub fn union(&self, other: &SemilinearSet) -> SemilinearSet {
        let mut terms = self.terms.clone();
        for t in &other.terms {
            if !terms.contains(t) {
                terms.push(t.clone());
            }
        }
        SemilinearSet { terms }
    }

    pub fn intersect(&self, other: &SemilinearSet) -> SemilinearSet {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let Some(t) = normalize_term(a.iter().chain(b).cloned().collect()) else { continue };
                if !terms.contains(&t) {
                    terms.push(t);
                }
            }
        }
        SemilinearSet { terms }
    }

    pub fn complement(&self) -> SemilinearSet {
        let mut acc = SemilinearSet::full();
        for t in &self.terms {
            let alternatives: Vec<Vec<Literal>> = t.iter().flat_map(|l| l.complement()).map(|l| vec![l]).collect();
            acc = acc.intersect(&SemilinearSet { terms: alternatives });
            acc.prune();
        }
        acc
    }

    /// Drops terms absorbed by another term, then empty terms. Keeps
    /// repeated complements from growing exponentially.
    fn prune(&mut self) {
        let mut terms = std::mem::take(&mut self.terms);
        // a term containing every literal of a shorter term is a subset of it
        terms.sort_by_key(Vec::len);
        let mut kept: Vec<Vec<Literal>> = Vec::with_capacity(terms.len());
        for t in terms {
            if !kept.iter().any(|o| o.iter().all(|l| t.contains(l))) {
                kept.push(t);
            }
        }
        self.terms = kept
            .into_iter()
            .filter(|t| !SemilinearSet { terms: vec![t.clone()] }.is_empty().unwrap_or(false))
            .collect();
    }

    pub fn difference(&self, other: &SemilinearSet) -> SemilinearSet {
        let mut d = self.intersect(&other.complement());
        d.prune();
        d
    }

    /// Mirror image under `(i, j) ↦ (j, i)`.
    pub fn transpose(&self) -> SemilinearSet {
        SemilinearSet { terms: self.terms.iter().map(|t| t.iter().map(Literal::transpose).collect()).collect() }
    }

    /// Coordinate of the graph regions, `None` when there are none.
    pub fn orientation(&self) -> Result<Option<Coord>, IdealsError> {
        let mut found = None;
        for c in self.terms.iter().flatten().filter_map(Literal::coord) {
            match found {
                None => found = Some(c),
                Some(d) if d != c => return Err(IdealsError::MixedOrientation),
                _ => {}
            }
        }
        Ok(found)
    }

    /// Copy whose graph regions are all row-wise, transposing if needed.
    /// `rows` selects whether rows (`j` fixed) or columns (`i` fixed) of
    /// `self` become the rows of the result. Graphs of shifted identities
    /// are inverted to the other coordinate when needed.
    fn lines(&self, rows: bool) -> Result<SemilinearSet, IdealsError> {
        let target = if rows { Coord::J } else { Coord::I };
        let terms = self
            .terms
            .iter()
            .map(|t| t.iter().map(|l| l.reoriented(target).ok_or(IdealsError::MixedOrientation)).collect())
            .collect::<Result<Vec<Vec<Literal>>, _>>()?;
        let s = SemilinearSet { terms };
        Ok(if rows { s } else { s.transpose() })
    }

    fn any_lines(&self) -> Result<SemilinearSet, IdealsError> {
        self.lines(true).or_else(|_| self.lines(false))
    }

    pub fn is_empty(&self) -> Result<bool, IdealsError> {
        let s = self.any_lines()?;
        let t = s.threshold();
        Ok((1..=t).all(|j| s.row(j).is_empty()))
    }

    pub fn is_finite(&self) -> Result<bool, IdealsError> {
        let s = self.any_lines()?;
        let t = s.threshold();
        Ok((1..=t).all(|j| !s.row(j).is_infinite()) && s.row(t).is_empty())
    }

    pub fn is_subset_of(&self, other: &SemilinearSet) -> Result<bool, IdealsError> {
        self.difference(other).is_empty()
    }

    pub fn same_set(&self, other: &SemilinearSet) -> Result<bool, IdealsError> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    /// Row `j` (points with second coordinate `j`).
    pub fn row_line(&self, j: u64) -> Result<Line, IdealsError> {
        Ok(self.lines(true)?.row(j))
    }

    /// Column `i` (points with first coordinate `i`).
    pub fn column_line(&self, i: u64) -> Result<Line, IdealsError> {
        Ok(self.lines(false)?.row(i))
    }

    /// Whether every row is finite; `Some(j)` names an infinite row otherwise.
    pub fn infinite_row(&self) -> Result<Option<u64>, IdealsError> {
        let s = self.lines(true)?;
        Ok(s.first_infinite_line())
    }

    pub fn infinite_column(&self) -> Result<Option<u64>, IdealsError> {
        let s = self.lines(false)?;
        Ok(s.first_infinite_line())
    }

    /// Largest index of a nonempty row (`0` if empty); `None` when unbounded.
    pub fn last_row(&self) -> Result<Option<u64>, IdealsError> {
        Ok(self.lines(true)?.last_line())
    }

    pub fn last_column(&self) -> Result<Option<u64>, IdealsError> {
        Ok(self.lines(false)?.last_line())
    }

    /// `j ↦ min` or `max` of row `j`, `0` on empty rows.
    /// `Max` fails on the first infinite row.
    pub fn row_extreme(&self, which: Extreme) -> Result<StepFunction, IdealsError> {
        self.lines(true)?.line_extreme(which)
    }

    pub fn column_extreme(&self, which: Extreme) -> Result<StepFunction, IdealsError> {
        self.lines(false)?.line_extreme(which)
    }

    /// Row index from which every row of `self` has the same shape.
    pub fn row_settled_from(&self) -> Result<u64, IdealsError> {
        Ok(self.lines(true)?.threshold())
    }

    pub fn column_settled_from(&self) -> Result<u64, IdealsError> {
        Ok(self.lines(false)?.threshold())
    }

    // Row analysis below assumes every graph region is row-wise.

    /// Beyond this row index, the combinatorial shape of every row is fixed:
    /// all tails are affine, all finite data lies below, and all pairwise
    /// orders among tails and constants have settled.
    fn threshold(&self) -> u64 {
        let mut t: u64 = 1;
        let mut funcs: Vec<StepFunction> = vec![StepFunction::constant(0), StepFunction::constant(1)];
        for l in self.terms.iter().flatten() {
            match l {
                Literal::Points(p) | Literal::CoPoints(p) => {
                    for &(i, j) in p {
                        t = t.max(j + 1);
                        funcs.push(StepFunction::constant(i));
                    }
                }
                Literal::Rect(a, b) => {
                    for &x in a.values() {
                        funcs.push(StepFunction::constant(x));
                    }
                    if let Some(&m) = b.values().iter().next_back() {
                        t = t.max(m + 1);
                    }
                }
                Literal::Under(f, _) | Literal::Above(f, _) => {
                    t = t.max(f.tail_start() as u64);
                    funcs.push(f.clone());
                }
            }
        }
        funcs.sort_by(|a, b| (&a.table, a.slope, a.offset).cmp(&(&b.table, b.slope, b.offset)));
        funcs.dedup();
        for (x, f) in funcs.iter().enumerate() {
            for g in &funcs[x + 1..] {
                t = t.max(f.order_stable_from(g) as u64);
            }
        }
        t + 1
    }

    fn row(&self, j: u64) -> Line {
        self.terms.iter().map(|t| term_row(t, j)).fold(Line::Empty, Line::merge)
    }

    fn first_infinite_line(&self) -> Option<u64> {
        let t = self.threshold();
        (1..=t).find(|&j| self.row(j).is_infinite())
    }

    fn last_line(&self) -> Option<u64> {
        let t = self.threshold();
        if !self.row(t).is_empty() {
            return None;
        }
        Some((1..t).rev().find(|&j| !self.row(j).is_empty()).unwrap_or(0))
    }

    fn line_extreme(&self, which: Extreme) -> Result<StepFunction, IdealsError> {
        let value = |j: u64| -> Result<u64, IdealsError> {
            Ok(match (self.row(j), which) {
                (Line::Empty, _) => 0,
                (Line::Finite { min, .. } | Line::Infinite { min }, Extreme::Min) => min,
                (Line::Finite { max, .. }, Extreme::Max) => max,
                (Line::Infinite { .. }, Extreme::Max) => return Err(IdealsError::WitnessConstructionFailed { line: j }),
            })
        };
        let t = self.threshold();
        // the tail is affine from the threshold on
        let table = (1..t).map(value).collect::<Result<Vec<_>, _>>()?;
        let (v0, v1) = (value(t)?, value(t + 1)?);
        if let Some(j) = self.first_infinite_line().filter(|_| which == Extreme::Max) {
            return Err(IdealsError::WitnessConstructionFailed { line: j });
        }
        let slope = v1.checked_sub(v0).expect("row extremes are eventually nondecreasing");
        Ok(StepFunction::new(table, slope, v0).normalized())
    }
}

/// Same conjunction with literals of one kind merged: a finite point list
/// absorbs everything else, rectangles intersect, graph bounds over the same
/// coordinate combine by min or max, excluded points accumulate. `None` when
/// the conjunction is visibly empty.
fn normalize_term(term: Vec<Literal>) -> Option<Vec<Literal>> {
    if let Some(Literal::Points(p)) = term.iter().find(|l| matches!(l, Literal::Points(_))) {
        let kept: BTreeSet<(u64, u64)> =
            p.iter().copied().filter(|&(i, j)| i >= 1 && j >= 1 && term.iter().all(|l| l.contains(i, j))).collect();
        return (!kept.is_empty()).then(|| vec![Literal::Points(kept)]);
    }
    let mut rect: Option<(AxisSet, AxisSet)> = None;
    let mut bounds: [(Option<StepFunction>, Option<StepFunction>); 2] = [(None, None), (None, None)];
    let mut holes: BTreeSet<(u64, u64)> = BTreeSet::new();
    for l in term {
        match l {
            Literal::Points(_) => unreachable!("handled above"),
            Literal::CoPoints(p) => holes.extend(p),
            Literal::Rect(a, b) => {
                rect = Some(match rect {
                    None => (a, b),
                    Some((x, y)) => (x.intersect(&a), y.intersect(&b)),
                })
            }
            Literal::Under(f, c) => {
                let slot = &mut bounds[c as usize].0;
                *slot = Some(slot.take().map_or(f.clone(), |g| g.min(&f)));
            }
            Literal::Above(f, c) => {
                let slot = &mut bounds[c as usize].1;
                *slot = Some(slot.take().map_or(f.clone(), |g| g.max(&f)));
            }
        }
    }
    let mut out = Vec::new();
    if let Some((a, b)) = rect {
        if matches!(&a, AxisSet::Finite(v) if v.is_empty()) || matches!(&b, AxisSet::Finite(v) if v.is_empty()) {
            return None;
        }
        if a != AxisSet::all() || b != AxisSet::all() {
            out.push(Literal::Rect(a, b));
        }
    }
    for (c, (under, above)) in [Coord::J, Coord::I].into_iter().zip(bounds) {
        if let Some(f) = under {
            out.push(Literal::Under(f.normalized(), c));
        }
        if let Some(f) = above {
            if f.le(&StepFunction::constant(1)) {
                continue;
            }
            out.push(Literal::Above(f.normalized(), c));
        }
    }
    // holes outside the rest of the term change nothing
    holes.retain(|&(i, j)| out.iter().all(|l| l.contains(i, j)));
    if !holes.is_empty() {
        out.push(Literal::CoPoints(holes));
    }
    Some(out)
}

/// Row `j` of one conjunction of row-wise literals.
fn term_row(term: &[Literal], j: u64) -> Line {
    let member = |i: u64| term.iter().all(|l| l.contains(i, j));
    for l in term {
        if let Literal::Rect(_, b) = l {
            if !b.contains(j) {
                return Line::Empty;
            }
        }
    }
    let finite_candidates: Option<Vec<u64>> = term.iter().find_map(|l| match l {
        Literal::Points(p) => Some(p.iter().filter(|(_, y)| *y == j).map(|(x, _)| *x).collect()),
        Literal::Rect(AxisSet::Finite(a), _) => Some(a.iter().copied().collect()),
        _ => None,
    });
    if let Some(c) = finite_candidates {
        let hits: Vec<u64> = c.into_iter().filter(|&i| i >= 1 && member(i)).collect();
        return match (hits.iter().min(), hits.iter().max()) {
            (Some(&min), Some(&max)) => Line::Finite { min, max },
            _ => Line::Empty,
        };
    }
    let mut lower = 1u64;
    let mut upper: Option<u64> = None;
    let mut holes = 0usize;
    for l in term {
        match l {
            Literal::Under(f, _) => upper = Some(upper.map_or(f.eval(j), |u| u.min(f.eval(j)))),
            Literal::Above(f, _) => lower = lower.max(f.eval(j)),
            Literal::CoPoints(p) => holes += p.len(),
            Literal::Rect(AxisSet::Cofinite(x), _) => holes += x.len(),
            _ => {}
        }
    }
    if upper.is_some_and(|u| u < lower) {
        return Line::Empty;
    }
    // at most `holes` excluded values can sit between consecutive members
    let min = (lower..=lower + holes as u64).find(|&i| upper.is_none_or(|u| i <= u) && member(i));
    let Some(min) = min else { return Line::Empty };
    match upper {
        None => Line::Infinite { min },
        Some(u) => {
            let max = (u.saturating_sub(holes as u64).max(min)..=u).rev().find(|&i| member(i)).unwrap_or(min);
            Line::Finite { min, max }
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis = |a: &AxisSet| match a {
            AxisSet::Finite(s) => format!("{:?}", s),
            AxisSet::Cofinite(s) if s.is_empty() => "N".to_string(),
            AxisSet::Cofinite(s) => format!("N\\{:?}", s),
        };
        match self {
            Literal::Points(p) => write!(f, "{:?}", p),
            Literal::CoPoints(p) => write!(f, "N2\\{:?}", p),
            Literal::Rect(a, b) => write!(f, "{} x {}", axis(a), axis(b)),
            Literal::Under(g, Coord::J) => write!(f, "i <= {g}"),
            Literal::Under(g, Coord::I) => write!(f, "j <= {g}"),
            Literal::Above(g, Coord::J) => write!(f, "i >= {g}"),
            Literal::Above(g, Coord::I) => write!(f, "j >= {g}"),
        }
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                if t.is_empty() {
                    "N2".to_string()
                } else {
                    t.iter().map(|l| format!("({l})")).collect::<Vec<_>>().join(" & ")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// Set expression as written in documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetExpr {
    Empty,
    Full,
    Diagonal,
    Points(Vec<(u64, u64)>),
    Rect { i: AxisSet, j: AxisSet },
    /// `ℕ × {1, …, n}`.
    FirstRows(u64),
    /// `{1, …, n} × ℕ`.
    FirstColumns(u64),
    Under { of: Coord, f: StepFunction },
    Above { of: Coord, f: StepFunction },
    Union(Vec<SetExpr>),
    Intersect(Vec<SetExpr>),
    Complement(Box<SetExpr>),
    Transpose(Box<SetExpr>),
}

impl SetExpr {
    pub fn eval(&self) -> SemilinearSet {
        match self {
            SetExpr::Empty => SemilinearSet::empty(),
            SetExpr::Full => SemilinearSet::full(),
            SetExpr::Diagonal => SemilinearSet::diagonal(),
            SetExpr::Points(p) => SemilinearSet::points(p.iter().copied()),
            SetExpr::Rect { i, j } => SemilinearSet::rect(i.clone(), j.clone()),
            SetExpr::FirstRows(n) => SemilinearSet::first_rows(*n),
            SetExpr::FirstColumns(n) => SemilinearSet::first_columns(*n),
            SetExpr::Under { of, f } => SemilinearSet::literal(Literal::Under(f.clone(), *of)),
            SetExpr::Above { of, f } => SemilinearSet::literal(Literal::Above(f.clone(), *of)),
            SetExpr::Union(xs) => xs.iter().fold(SemilinearSet::empty(), |acc, x| acc.union(&x.eval())),
            SetExpr::Intersect(xs) => xs.iter().fold(SemilinearSet::full(), |acc, x| acc.intersect(&x.eval())),
            SetExpr::Complement(x) => x.eval().complement(),
            SetExpr::Transpose(x) => x.eval().transpose(),
        }
    }
}
