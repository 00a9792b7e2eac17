//! Pareto dominance, NSGA-II and SPEA2 selection machinery.
//!
//! All objectives are minimized. Dominance always works on raw objective
//! values; [`ObjectiveBounds`] only scale distances for crowding and
//! density. Invalid individuals are dominated by every valid one and
//! dominate nothing.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::evalkit::ObjectiveVector;

/// Normalized coordinate standing in for a non-finite objective of an
/// invalid individual, so distances stay finite.
const INVALID_COORD: f64 = 1.0e6;

/// Anything with a vector of minimized objective values.
pub trait Objectives {
    fn dim(&self) -> usize;
    fn value(&self, i: usize) -> f64;
    fn is_valid(&self) -> bool {
        true
    }
}

impl Objectives for ObjectiveVector {
    fn dim(&self) -> usize {
        2
    }

    fn value(&self, i: usize) -> f64 {
        match i {
            0 => self.error,
            1 => self.size as f64,
            _ => panic!("objective index {i} out of range"),
        }
    }

    fn is_valid(&self) -> bool {
        self.valid
    }
}

impl Objectives for [f64] {
    fn dim(&self) -> usize {
        self.len()
    }

    fn value(&self, i: usize) -> f64 {
        self[i]
    }
}

impl Objectives for Vec<f64> {
    fn dim(&self) -> usize {
        self.len()
    }

    fn value(&self, i: usize) -> f64 {
        self[i]
    }
}

impl<const N: usize> Objectives for [f64; N] {
    fn dim(&self) -> usize {
        N
    }

    fn value(&self, i: usize) -> f64 {
        self[i]
    }
}

impl<T: Objectives + ?Sized> Objectives for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&self, i: usize) -> f64 {
        (**self).value(i)
    }

    fn is_valid(&self) -> bool {
        (**self).is_valid()
    }
}

/// `u` dominates `v`: no worse in every objective, strictly better in one.
pub fn dominates<U, V>(u: &U, v: &V) -> bool
where
    U: Objectives + ?Sized,
    V: Objectives + ?Sized,
{
    match (u.is_valid(), v.is_valid()) {
        (false, _) => return false,
        (true, false) => return true,
        (true, true) => {}
    }
    let mut strictly = false;
    for i in 0..u.dim() {
        let (a, b) = (u.value(i), v.value(i));
        if a > b {
            return false;
        }
        if a < b {
            strictly = true;
        }
    }
    strictly
}

fn same_point<U: Objectives + ?Sized, V: Objectives + ?Sized>(u: &U, v: &V) -> bool {
    u.is_valid() == v.is_valid() && (0..u.dim()).all(|i| u.value(i) == v.value(i))
}

/// Per-objective `(min, max)` used to scale objective-space distances.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveBounds {
    ranges: Vec<(f64, f64)>,
}

impl Default for ObjectiveBounds {
    /// Error in `[0, 1]`, size in `[4, 64]`.
    fn default() -> Self {
        Self {
            ranges: vec![(0.0, 1.0), (4.0, 64.0)],
        }
    }
}

impl ObjectiveBounds {
    pub fn new(ranges: Vec<(f64, f64)>) -> Result<Self> {
        if ranges.is_empty() {
            return Err(Error::config("objective bounds are empty"));
        }
        for (i, &(lo, hi)) in ranges.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config(format!(
                    "objective {i}: bounds [{lo}, {hi}] need min < max"
                )));
            }
        }
        Ok(Self { ranges })
    }

    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }

    pub fn normalize<O: Objectives + ?Sized>(&self, o: &O, i: usize) -> f64 {
        let (lo, hi) = self.ranges[i];
        let v = (o.value(i) - lo) / (hi - lo);
        if v.is_finite() {
            v
        } else {
            INVALID_COORD
        }
    }

    fn normalized_points<O: Objectives>(&self, pop: &[O]) -> Vec<Vec<f64>> {
        pop.iter()
            .map(|o| (0..o.dim()).map(|i| self.normalize(o, i)).collect())
            .collect()
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Result of fast non-dominated sorting.
#[derive(Debug, Clone, PartialEq)]
pub struct NondominatedSort {
    /// Fronts in rank order, members in ascending index order.
    pub fronts: Vec<Vec<usize>>,
    pub rank: Vec<usize>,
    /// Number of individuals dominating each individual.
    pub domination_count: Vec<usize>,
    /// Individuals each individual dominates.
    pub dominated_set: Vec<Vec<usize>>,
}

/// Fast non-dominated sorting in `O(M N^2)`.
pub fn fast_nondominated_sort<O: Objectives>(pop: &[O]) -> NondominatedSort {
    let n = pop.len();
    let mut domination_count = vec![0usize; n];
    let mut dominated_set = vec![Vec::new(); n];
    for p in 0..n {
        for q in p + 1..n {
            if dominates(&pop[p], &pop[q]) {
                dominated_set[p].push(q);
                domination_count[q] += 1;
            } else if dominates(&pop[q], &pop[p]) {
                dominated_set[q].push(p);
                domination_count[p] += 1;
            }
        }
    }
    for s in &mut dominated_set {
        s.sort_unstable();
    }

    let mut remaining = domination_count.clone();
    let mut rank = vec![0usize; n];
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&p| remaining[p] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            rank[p] = fronts.len();
            for &q in &dominated_set[p] {
                remaining[q] -= 1;
                if remaining[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    NondominatedSort {
        fronts,
        rank,
        domination_count,
        dominated_set,
    }
}

/// Crowding distance of each member of `front` (aligned with `front`).
///
/// Per objective the front is sorted by normalized value (ties by index);
/// the two boundary members get `+inf`, interior members accumulate the
/// normalized gap between their neighbours.
pub fn crowding_distance<O: Objectives>(pop: &[O], front: &[usize], bounds: &ObjectiveBounds) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let dim = pop[front[0]].dim();
    for m in 0..dim {
        let vals: Vec<f64> = front.iter().map(|&i| bounds.normalize(&pop[i], m)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(front[a].cmp(&front[b])));
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        for w in 1..n - 1 {
            let k = order[w];
            if dist[k].is_finite() {
                dist[k] += vals[order[w + 1]] - vals[order[w - 1]];
            }
        }
    }
    dist
}

/// NSGA-II bookkeeping for one individual.
#[derive(Debug, Clone, PartialEq)]
pub struct Nsga2Info {
    pub rank: usize,
    pub crowding: f64,
    pub domination_count: usize,
    pub dominated_set: Vec<usize>,
}

/// Ranks and crowding distances for a whole population.
pub fn nsga2_assign<O: Objectives>(pop: &[O], bounds: &ObjectiveBounds) -> Vec<Nsga2Info> {
    let sort = fast_nondominated_sort(pop);
    let mut crowding = vec![0.0; pop.len()];
    for front in &sort.fronts {
        for (&i, d) in front.iter().zip(crowding_distance(pop, front, bounds)) {
            crowding[i] = d;
        }
    }
    sort.rank
        .into_iter()
        .zip(crowding)
        .zip(sort.domination_count.into_iter().zip(sort.dominated_set))
        .map(|((rank, crowding), (domination_count, dominated_set))| Nsga2Info {
            rank,
            crowding,
            domination_count,
            dominated_set,
        })
        .collect()
}

/// Crowded comparison: lower rank first, then larger crowding distance.
/// `Less` means `a` is preferred.
pub fn crowded_cmp(a: &Nsga2Info, b: &Nsga2Info) -> Ordering {
    a.rank
        .cmp(&b.rank)
        .then_with(|| b.crowding.partial_cmp(&a.crowding).unwrap_or(Ordering::Equal))
}

/// Elitist NSGA-II survivor selection from `union`. Returns the survivor
/// indices (rank order, the split front by descending crowding) and the
/// bookkeeping for every member of the union.
pub fn nsga2_environmental<O: Objectives>(
    union: &[O],
    target_size: usize,
    bounds: &ObjectiveBounds,
) -> (Vec<usize>, Vec<Nsga2Info>) {
    let info = nsga2_assign(union, bounds);
    let mut by_rank: Vec<Vec<usize>> = Vec::new();
    for (i, inf) in info.iter().enumerate() {
        if by_rank.len() <= inf.rank {
            by_rank.resize_with(inf.rank + 1, Vec::new);
        }
        by_rank[inf.rank].push(i);
    }
    let mut survivors = Vec::with_capacity(target_size);
    for mut front in by_rank {
        let room = target_size - survivors.len();
        if room == 0 {
            break;
        }
        if front.len() > room {
            front.sort_by(|&a, &b| {
                info[b]
                    .crowding
                    .partial_cmp(&info[a].crowding)
                    .unwrap_or(Ordering::Equal)
                    .then(a.cmp(&b))
            });
            front.truncate(room);
        }
        survivors.extend(front);
    }
    (survivors, info)
}

/// SPEA2 bookkeeping for one individual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spea2Info {
    /// Number of individuals this one dominates.
    pub strength: usize,
    /// Sum of the strengths of its dominators.
    pub raw: usize,
    /// `1 / (sigma_k + 2)` from the k-th nearest neighbour distance.
    pub density: f64,
    /// `raw + density`; below 1 exactly for non-dominated individuals.
    pub fitness: f64,
}

/// SPEA2 fitness over `union` (population plus archive), with
/// `k = floor(sqrt(|union|))` and distances in bounds-normalized space.
pub fn spea2_assign<O: Objectives>(union: &[O], bounds: &ObjectiveBounds) -> Vec<Spea2Info> {
    let n = union.len();
    let mut dom = vec![false; n * n];
    let mut strength = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && dominates(&union[i], &union[j]) {
                dom[i * n + j] = true;
                strength[i] += 1;
            }
        }
    }
    let raw: Vec<usize> = (0..n)
        .map(|i| (0..n).filter(|&j| dom[j * n + i]).map(|j| strength[j]).sum())
        .collect();

    let pts = bounds.normalized_points(union);
    let k = (n as f64).sqrt().floor() as usize;
    let mut dists = Vec::with_capacity(n.saturating_sub(1));
    (0..n)
        .map(|i| {
            dists.clear();
            dists.extend((0..n).filter(|&j| j != i).map(|j| euclid(&pts[i], &pts[j])));
            let sigma = if dists.is_empty() {
                0.0
            } else {
                let kth = k.clamp(1, dists.len()) - 1;
                *dists.select_nth_unstable_by(kth, f64::total_cmp).1
            };
            let density = 1.0 / (sigma + 2.0);
            Spea2Info {
                strength: strength[i],
                raw: raw[i],
                density,
                fitness: raw[i] as f64 + density,
            }
        })
        .collect()
}

/// Archive chosen by SPEA2 environmental selection.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveSelection {
    /// Indices into the union.
    pub members: Vec<usize>,
    /// Dominated individuals were added to reach capacity.
    pub underfilled: bool,
}

/// SPEA2 environmental selection.
///
/// All non-dominated members (`F < 1`) are copied. An overfull archive is
/// truncated by repeatedly dropping the member whose sorted nearest-neighbour
/// distance list is lexicographically smallest; the per-objective extreme
/// members are exempt while other candidates remain. An underfull archive
/// is topped up with the best dominated members by ascending `F`, valid
/// before invalid.
pub fn spea2_environmental<O: Objectives>(
    union: &[O],
    info: &[Spea2Info],
    capacity: usize,
    bounds: &ObjectiveBounds,
) -> ArchiveSelection {
    let nondominated: Vec<usize> = (0..union.len()).filter(|&i| info[i].raw == 0).collect();
    match nondominated.len().cmp(&capacity) {
        Ordering::Equal => ArchiveSelection {
            members: nondominated,
            underfilled: false,
        },
        Ordering::Greater => ArchiveSelection {
            members: truncate(union, nondominated, capacity, bounds),
            underfilled: false,
        },
        Ordering::Less => {
            let mut rest: Vec<usize> = (0..union.len()).filter(|&i| info[i].raw != 0).collect();
            rest.sort_by(|&a, &b| {
                union[b]
                    .is_valid()
                    .cmp(&union[a].is_valid())
                    .then(info[a].fitness.total_cmp(&info[b].fitness))
                    .then(a.cmp(&b))
            });
            rest.truncate(capacity - nondominated.len());
            let underfilled = !rest.is_empty();
            let mut members = nondominated;
            members.extend(rest);
            ArchiveSelection { members, underfilled }
        }
    }
}

fn truncate<O: Objectives>(union: &[O], set: Vec<usize>, capacity: usize, bounds: &ObjectiveBounds) -> Vec<usize> {
    let n = set.len();
    let pts: Vec<Vec<f64>> = set
        .iter()
        .map(|&i| (0..union[i].dim()).map(|m| bounds.normalize(&union[i], m)).collect())
        .collect();

    // neighbours of each member sorted by (distance, local index)
    let neighbours: Vec<Vec<(f64, usize)>> = (0..n)
        .map(|i| {
            let mut v: Vec<(f64, usize)> = (0..n).filter(|&j| j != i).map(|j| (euclid(&pts[i], &pts[j]), j)).collect();
            v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            v
        })
        .collect();

    let mut protected = vec![false; n];
    let dim = pts.first().map_or(0, Vec::len);
    for m in 0..dim {
        let best = (0..n)
            .min_by(|&a, &b| pts[a][m].total_cmp(&pts[b][m]).then(a.cmp(&b)))
            .expect("set is non-empty");
        protected[best] = true;
    }

    let mut alive = vec![true; n];
    let mut cursor = vec![0usize; n];
    let mut left = n;
    while left > capacity {
        for i in 0..n {
            if alive[i] {
                while !alive[neighbours[i][cursor[i]].1] {
                    cursor[i] += 1;
                }
            }
        }
        let lex = |a: usize, b: usize| -> Ordering {
            let mut ia = neighbours[a][cursor[a]..].iter().filter(|e| alive[e.1]);
            let mut ib = neighbours[b][cursor[b]..].iter().filter(|e| alive[e.1]);
            loop {
                match (ia.next(), ib.next()) {
                    (Some(x), Some(y)) => match x.0.total_cmp(&y.0) {
                        Ordering::Equal => continue,
                        o => return o,
                    },
                    _ => return Ordering::Equal,
                }
            }
        };
        let any_unprotected = (0..n).any(|i| alive[i] && !protected[i]);
        let mut victim: Option<usize> = None;
        for i in (0..n).filter(|&i| alive[i] && (!protected[i] || !any_unprotected)) {
            victim = match victim {
                None => Some(i),
                Some(v) => {
                    let first = neighbours[i][cursor[i]].0.total_cmp(&neighbours[v][cursor[v]].0);
                    // on a complete tie the later index goes, keeping the earliest copy
                    match first.then_with(|| lex(i, v)) {
                        Ordering::Greater => Some(v),
                        _ => Some(i),
                    }
                }
            };
        }
        let v = victim.expect("more members than capacity");
        alive[v] = false;
        left -= 1;
    }
    (0..n).filter(|&i| alive[i]).map(|i| set[i]).collect()
}

/// Non-dominated subset of the union of `sets`, sorted by objective values.
/// Members with identical objective vectors collapse to the one with the
/// lexicographically smallest `key`.
pub fn merge_fronts<T, O, FO, FK>(sets: &[Vec<T>], objectives: FO, key: FK) -> Vec<T>
where
    T: Clone,
    O: Objectives,
    FO: Fn(&T) -> O,
    FK: Fn(&T) -> String,
{
    let pool: Vec<&T> = sets.iter().flatten().collect();
    let objs: Vec<O> = pool.iter().map(|t| objectives(t)).collect();
    let keys: Vec<String> = pool.iter().map(|t| key(t)).collect();
    let mut keep: Vec<usize> = (0..pool.len())
        .filter(|&i| objs[i].is_valid() || objs.iter().all(|o| !o.is_valid()))
        .filter(|&i| !objs.iter().any(|o| dominates(o, &objs[i])))
        .collect();
    keep.sort_by(|&a, &b| {
        let (oa, ob) = (&objs[a], &objs[b]);
        (0..oa.dim())
            .map(|m| oa.value(m).total_cmp(&ob.value(m)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
            .then_with(|| keys[a].cmp(&keys[b]))
            .then(a.cmp(&b))
    });
    keep.dedup_by(|later, earlier| same_point(&objs[*later], &objs[*earlier]));
    keep.into_iter().map(|i| pool[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(e: f64, s: usize) -> ObjectiveVector {
        ObjectiveVector::new(e, s)
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&ov(0.1, 5), &ov(0.2, 7)));
        assert!(!dominates(&ov(0.1, 7), &ov(0.2, 5)));
        assert!(!dominates(&ov(0.2, 5), &ov(0.1, 7)));
        assert!(!dominates(&ov(0.1, 5), &ov(0.1, 5)));
    }

    #[test]
    fn invalid_is_dominated_by_any_valid() {
        let bad = ObjectiveVector::invalid(1);
        assert!(dominates(&ov(100.0, 64), &bad));
        assert!(!dominates(&bad, &ov(100.0, 64)));
        assert!(!dominates(&bad, &ObjectiveVector::invalid(3)));
    }

    #[test]
    fn chain_gives_singleton_fronts() {
        let pop = [[0.1, 1.0], [0.2, 2.0], [0.3, 3.0]];
        let s = fast_nondominated_sort(&pop);
        assert_eq!(s.fronts, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(s.domination_count, vec![0, 1, 2]);
        assert_eq!(s.dominated_set, vec![vec![1, 2], vec![2], vec![]]);
    }

    #[test]
    fn mutually_nondominated_is_one_front() {
        let pop = [[0.0, 3.0], [1.0, 2.0], [2.0, 1.0], [3.0, 0.0]];
        assert_eq!(fast_nondominated_sort(&pop).fronts, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn crowding_examples() {
        let bounds = ObjectiveBounds::default();
        let two = [ov(0.1, 5), ov(0.2, 4)];
        assert_eq!(crowding_distance(&two, &[0, 1], &bounds), vec![f64::INFINITY; 2]);

        let three = [ov(0.0, 64), ov(0.5, 34), ov(1.0, 4)];
        let d = crowding_distance(&three, &[0, 1, 2], &bounds);
        assert_eq!(d[0], f64::INFINITY);
        assert_eq!(d[2], f64::INFINITY);
        assert!((d[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn inner_duplicate_has_zero_crowding() {
        let bounds = ObjectiveBounds::default();
        let pop = [ov(0.0, 64), ov(0.5, 34), ov(0.5, 34), ov(0.5, 34), ov(1.0, 4)];
        let d = crowding_distance(&pop, &[0, 1, 2, 3, 4], &bounds);
        assert_eq!(d[2], 0.0);
        assert!(d[1] > 0.0 && d[3] > 0.0);
    }

    #[test]
    fn environmental_keeps_boundaries() {
        let bounds = ObjectiveBounds::default();
        let pop: Vec<ObjectiveVector> = (0..10).map(|i| ov(i as f64 / 10.0, 40 - 3 * i)).collect();
        let (surv, _) = nsga2_environmental(&pop, 4, &bounds);
        assert_eq!(surv.len(), 4);
        assert!(surv.contains(&0) && surv.contains(&9));
        let (all, _) = nsga2_environmental(&pop, 10, &bounds);
        let mut all = all;
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn crowded_cmp_orders_rank_then_crowding() {
        let mk = |rank, crowding| Nsga2Info {
            rank,
            crowding,
            domination_count: 0,
            dominated_set: vec![],
        };
        assert_eq!(crowded_cmp(&mk(0, 0.1), &mk(1, 5.0)), Ordering::Less);
        assert_eq!(crowded_cmp(&mk(1, 0.5), &mk(1, 0.1)), Ordering::Less);
        assert_eq!(crowded_cmp(&mk(1, f64::INFINITY), &mk(1, f64::INFINITY)), Ordering::Equal);
    }

    #[test]
    fn spea2_chain() {
        let pop = [ov(0.1, 5), ov(0.2, 6), ov(0.3, 7)];
        let info = spea2_assign(&pop, &ObjectiveBounds::default());
        let s: Vec<usize> = info.iter().map(|i| i.strength).collect();
        let r: Vec<usize> = info.iter().map(|i| i.raw).collect();
        assert_eq!(s, vec![2, 1, 0]);
        assert_eq!(r, vec![0, 2, 3]);
        assert!(info[0].fitness < 1.0);
        assert!(info.iter().all(|i| i.density > 0.0 && i.density <= 0.5));
    }

    #[test]
    fn spea2_identical_points_share_raw() {
        let pop = [ov(0.1, 5), ov(0.1, 5), ov(0.05, 9), ov(0.3, 12)];
        let info = spea2_assign(&pop, &ObjectiveBounds::default());
        assert_eq!(info[0].raw, info[1].raw);
        assert_eq!(info[0].fitness - info[0].density, info[1].fitness - info[1].density);
    }

    #[test]
    fn spea2_underfilled_pads_with_best_dominated() {
        let pop = [ov(0.1, 5), ov(0.2, 6), ov(0.3, 7), ObjectiveVector::invalid(1)];
        let bounds = ObjectiveBounds::default();
        let info = spea2_assign(&pop, &bounds);
        let sel = spea2_environmental(&pop, &info, 3, &bounds);
        assert_eq!(sel.members, vec![0, 1, 2]);
        assert!(sel.underfilled);
    }

    #[test]
    fn truncation_removes_near_duplicate_first() {
        let bounds = ObjectiveBounds::default();
        let pop = [
            ov(0.0, 64),
            ov(0.2, 50),
            ov(0.4, 36),
            ov(0.4001, 35),
            ov(0.6, 22),
            ov(0.8, 10),
            ov(1.0, 4),
        ];
        let info = spea2_assign(&pop, &bounds);
        let sel = spea2_environmental(&pop, &info, 6, &bounds);
        assert_eq!(sel.members.len(), 6);
        assert!(!sel.members.contains(&2) || !sel.members.contains(&3));
        assert!(sel.members.contains(&0) && sel.members.contains(&6));
    }

    #[test]
    fn merge_collapses_duplicates_by_key() {
        let a = vec![(ov(0.1, 5), "b".to_string()), (ov(0.5, 2), "x".to_string())];
        let b = vec![(ov(0.1, 5), "a".to_string()), (ov(0.2, 9), "y".to_string())];
        let m = merge_fronts(&[a, b], |t| t.0, |t| t.1.clone());
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].1, "a");
        assert_eq!(m[1].1, "x");
    }
}
