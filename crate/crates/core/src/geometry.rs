//! Ultrametric ball geometry: the containment trichotomy, critical balls,
//! the laminar forest, chains, and separable sets.
//!
//! All radii are powers of the ambient base, so a ball stores only its
//! radius exponent. Two balls are equal as point sets iff they share a
//! canonical key (radius exponent, residue of the center); the containment
//! relation between any two balls is decided by one center-distance test.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use thiserror::Error;

use crate::sumset::FiniteSet;
use crate::valued::{AmbientMismatch, NormExponent, ValuedElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("nearest-neighbor radii are undefined on singletons")]
    Singleton,
    #[error(transparent)]
    Ambient(#[from] AmbientMismatch),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("certificate is empty")]
    EmptyCertificate,
    #[error("certificate lists {elements} elements but {balls} balls")]
    LengthMismatch { elements: usize, balls: usize },
    #[error("duplicate element `{0}` in certificate")]
    DuplicateElement(String),
    #[error("element `{0}` is not in the reference set")]
    NotInSet(String),
    #[error("ball for `{element}` is not its critical ball")]
    WrongCriticalBall { element: String },
    #[error("balls at positions {index} and {} do not nest", index + 1)]
    NotNested { index: usize },
    #[error("witness {index} does not capture exactly the first {index} elements")]
    WitnessMismatch { index: usize },
    #[error(transparent)]
    Ambient(#[from] AmbientMismatch),
}

/// The closed ball `B(center, base^rexp) = {y : ‖center - y‖ ≤ base^rexp}`.
///
/// No `PartialEq` on purpose: two balls with different centers can be equal
/// as point sets. Equality goes through [`Ball::key`].
#[derive(Debug, Clone)]
pub struct Ball<T: ValuedElement> {
    center: T,
    rexp: i64,
}

/// Canonical identity of a ball as a point set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BallKey<T: ValuedElement> {
    pub rexp: i64,
    pub residue: T,
}

/// Outcome of comparing two balls as point sets. Exactly one holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallRelation {
    Disjoint,
    Equal,
    Subset,
    Superset,
}

impl<T: ValuedElement> Ball<T> {
    pub fn new(center: T, rexp: i64) -> Self {
        Ball { center, rexp }
    }

    pub fn center(&self) -> &T {
        &self.center
    }

    pub fn rexp(&self) -> i64 {
        self.rexp
    }

    pub fn contains(&self, x: &T) -> Result<bool, AmbientMismatch> {
        Ok(self.center.dist_exp(x)? <= NormExponent::Finite(self.rexp))
    }

    pub fn key(&self) -> BallKey<T> {
        BallKey { rexp: self.rexp, residue: self.center.ball_residue(self.rexp) }
    }

    pub fn same_points(&self, other: &Ball<T>) -> bool {
        self.key() == other.key()
    }
}

/// Decides the containment trichotomy: two balls are disjoint, equal, or
/// strictly nested. With equal radii only disjoint/equal can occur.
pub fn ball_compare<T: ValuedElement>(
    b1: &Ball<T>,
    b2: &Ball<T>,
) -> Result<BallRelation, AmbientMismatch> {
    let d = b1.center.dist_exp(&b2.center)?;
    let rmax = NormExponent::Finite(b1.rexp.max(b2.rexp));
    if d > rmax {
        return Ok(BallRelation::Disjoint);
    }
    Ok(match b1.rexp.cmp(&b2.rexp) {
        std::cmp::Ordering::Equal => BallRelation::Equal,
        std::cmp::Ordering::Less => BallRelation::Subset,
        std::cmp::Ordering::Greater => BallRelation::Superset,
    })
}

/// Per-element nearest-neighbor data: `rexp` is the exponent of
/// `min_{a' ≠ a} ‖a - a'‖` and `ball` is the critical ball `B(a, base^rexp)`.
#[derive(Debug, Clone)]
pub struct CriticalBall<T: ValuedElement> {
    pub element: T,
    pub rexp: i64,
    pub ball: Ball<T>,
}

/// The critical-ball assignment of a whole set, in canonical element order.
#[derive(Debug, Clone)]
pub struct CriticalBallAssignment<T: ValuedElement> {
    items: Vec<CriticalBall<T>>,
}

impl<T: ValuedElement> CriticalBallAssignment<T> {
    pub fn items(&self) -> &[CriticalBall<T>] {
        &self.items
    }

    pub fn get(&self, element: &T) -> Option<&CriticalBall<T>> {
        self.items.iter().find(|cb| &cb.element == element)
    }
}

/// Computes every nearest-neighbor radius and critical ball with `O(|A|^2)`
/// exact distance evaluations.
pub fn critical_balls<T: ValuedElement>(
    set: &FiniteSet<T>,
) -> Result<CriticalBallAssignment<T>, GeometryError> {
    let elems = set.elements();
    if elems.len() < 2 {
        return Err(GeometryError::Singleton);
    }
    let mut items = Vec::with_capacity(elems.len());
    for (i, a) in elems.iter().enumerate() {
        let mut best: Option<i64> = None;
        for (j, b) in elems.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = a
                .dist_exp(b)?
                .finite()
                .expect("distinct elements are at positive distance");
            best = Some(match best {
                Some(cur) => cur.min(d),
                None => d,
            });
        }
        let rexp = best.expect("at least two elements");
        items.push(CriticalBall { element: a.clone(), rexp, ball: Ball::new(a.clone(), rexp) });
    }
    Ok(CriticalBallAssignment { items })
}

/// One node of the laminar forest: a distinct critical ball, the elements
/// whose critical ball it is, and its position in the containment order.
#[derive(Debug, Clone)]
pub struct ForestNode<T: ValuedElement> {
    pub ball: Ball<T>,
    pub key: BallKey<T>,
    pub members: Vec<T>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Sum of member counts along the root path through this node; the
    /// length of the best chain ending inside this node's ball.
    pub depth_weight: u64,
}

impl<T: ValuedElement> ForestNode<T> {
    pub fn weight(&self) -> u64 {
        self.members.len() as u64
    }
}

/// The nesting forest of the distinct critical balls. Parent links follow
/// minimal strict containment; nodes with the same radius exponent are
/// disjoint, so the structure is a forest by the ball trichotomy.
#[derive(Debug, Clone)]
pub struct LaminarForest<T: ValuedElement> {
    nodes: Vec<ForestNode<T>>,
    roots: Vec<usize>,
}

impl<T: ValuedElement> LaminarForest<T> {
    pub fn nodes(&self) -> &[ForestNode<T>] {
        &self.nodes
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn total_weight(&self) -> u64 {
        self.nodes.iter().map(|n| n.weight()).sum()
    }

    /// Size of the largest critical-ball equivalence class; bounded by the
    /// residue-field size.
    pub fn max_class_size(&self) -> u64 {
        self.nodes.iter().map(|n| n.weight()).max().unwrap_or(0)
    }
}

/// Groups the assignment by ball key and wires up minimal strict
/// containment. Node order (and therefore every output derived from it) is
/// the canonical key order.
pub fn build_forest<T: ValuedElement>(cb: &CriticalBallAssignment<T>) -> LaminarForest<T> {
    let mut groups: BTreeMap<BallKey<T>, Vec<T>> = BTreeMap::new();
    let mut balls: BTreeMap<BallKey<T>, Ball<T>> = BTreeMap::new();
    for item in cb.items() {
        let key = item.ball.key();
        groups.entry(key.clone()).or_default().push(item.element.clone());
        balls.entry(key).or_insert_with(|| item.ball.clone());
    }
    let mut nodes: Vec<ForestNode<T>> = groups
        .into_iter()
        .map(|(key, members)| ForestNode {
            ball: balls[&key].clone(),
            key,
            members,
            parent: None,
            children: Vec::new(),
            depth_weight: 0,
        })
        .collect();

    for i in 0..nodes.len() {
        let mut parent: Option<usize> = None;
        for j in 0..nodes.len() {
            if i == j {
                continue;
            }
            let rel = ball_compare(&nodes[i].ball, &nodes[j].ball).expect("same ambient");
            if rel == BallRelation::Subset {
                parent = Some(match parent {
                    Some(cur) if nodes[cur].ball.rexp() <= nodes[j].ball.rexp() => cur,
                    _ => j,
                });
            }
        }
        nodes[i].parent = parent;
    }
    for i in 0..nodes.len() {
        if let Some(p) = nodes[i].parent {
            nodes[p].children.push(i);
        }
    }
    let roots: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].parent.is_none()).collect();

    // Depth weights by DFS from the roots.
    let mut stack: Vec<(usize, u64)> = roots.iter().map(|&r| (r, 0)).collect();
    while let Some((i, above)) = stack.pop() {
        let dw = above + nodes[i].weight();
        nodes[i].depth_weight = dw;
        for &c in &nodes[i].children {
            stack.push((c, dw));
        }
    }
    LaminarForest { nodes, roots }
}

/// A chain: distinct elements whose critical balls nest (non-strictly),
/// listed in ascending ball order. Elements whose critical balls coincide
/// may coexist in a chain.
#[derive(Debug, Clone)]
pub struct ChainCertificate<T: ValuedElement> {
    pub elements: Vec<T>,
    pub balls: Vec<Ball<T>>,
}

impl<T: ValuedElement> ChainCertificate<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Extracts a maximum-length chain: the heaviest root path of the forest.
/// Elements are ordered by ascending ball, canonically within each node;
/// ties between equally heavy paths resolve to the canonically first node.
pub fn longest_chain<T: ValuedElement>(forest: &LaminarForest<T>) -> ChainCertificate<T> {
    let best = (0..forest.nodes.len())
        .max_by(|&a, &b| {
            forest.nodes[a]
                .depth_weight
                .cmp(&forest.nodes[b].depth_weight)
                .then(forest.nodes[b].key.cmp(&forest.nodes[a].key))
        })
        .expect("forest has at least one node");
    let mut path = Vec::new();
    let mut cursor = Some(best);
    while let Some(i) = cursor {
        path.push(i);
        cursor = forest.nodes[i].parent;
    }
    // `path` runs deepest-to-root, which is ascending ball order already.
    let mut elements = Vec::new();
    let mut balls = Vec::new();
    for &i in &path {
        let node = &forest.nodes[i];
        for m in &node.members {
            elements.push(m.clone());
            balls.push(Ball::new(m.clone(), node.ball.rexp()));
        }
    }
    ChainCertificate { elements, balls }
}

fn ceil_log2(n: u64) -> u64 {
    debug_assert!(n >= 2);
    u64::from((n - 1).ilog2()) + 1
}

/// Guaranteed chain length: `|A|^5 / (2^7 |A+A|^2 |AA|^2 ⌈log2|A|⌉^3)` as an
/// exact rational. The ceiling convention makes the bound slightly weaker
/// than the real-logarithm version, so exact integer arithmetic can assert
/// it safely; `|A| = 2` uses `log2 = 1`.
pub fn chain_bound(
    size_a: usize,
    size_sum: usize,
    size_prod: usize,
) -> Result<BigRational, GeometryError> {
    if size_a < 2 {
        return Err(GeometryError::Singleton);
    }
    let log = BigInt::from(ceil_log2(size_a as u64));
    let numer = BigInt::from(size_a).pow(5);
    let denom = BigInt::from(128)
        * BigInt::from(size_sum).pow(2)
        * BigInt::from(size_prod).pow(2)
        * log.pow(3);
    Ok(BigRational::new(numer, denom))
}

/// A separability witness: an ordering of the set together with one ball per
/// prefix whose intersection with the set is exactly that prefix.
#[derive(Debug, Clone)]
pub struct SeparableCertificate<T: ValuedElement> {
    pub elements: Vec<T>,
    pub witnesses: Vec<Ball<T>>,
}

impl<T: ValuedElement> SeparableCertificate<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Decides separability via the ultrametric dendrogram.
///
/// A set is separable iff every split, from the top down, partitions the
/// current cluster into exactly two parts, one of which is a singleton; the
/// singleton is appended last and the procedure recurses on the other part.
///
/// Why this is equivalent to the prefix-ball definition: the minimal
/// enclosing ball of any prefix is contained in every witness ball for that
/// prefix, so witnesses can be taken minimal; and a prefix straddling two or
/// more top-level clusters has minimal-ball radius equal to the whole
/// diameter, which captures everything. So the next-to-last prefix must be a
/// single top-level cluster missing exactly one (singleton) cluster, and
/// induction does the rest. Cross-validated against the exhaustive ordering
/// search for small sets.
pub fn is_separable<T: ValuedElement>(
    set: &FiniteSet<T>,
) -> Result<Option<SeparableCertificate<T>>, GeometryError> {
    let elems = set.elements().to_vec();
    let n = elems.len();
    if n == 1 {
        let witness = Ball::new(elems[0].clone(), 0);
        return Ok(Some(SeparableCertificate { elements: elems, witnesses: vec![witness] }));
    }
    let mut dist = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = elems[i]
                .dist_exp(&elems[j])?
                .finite()
                .expect("distinct elements");
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }

    let mut active: Vec<usize> = (0..n).collect();
    let mut peeled: Vec<usize> = Vec::new();
    while active.len() >= 2 {
        let diam = active
            .iter()
            .flat_map(|&i| active.iter().map(move |&j| (i, j)))
            .filter(|(i, j)| i < j)
            .map(|(i, j)| dist[i][j])
            .max()
            .expect("two or more active elements");
        // Classes of the equivalence `dist ≤ diam - 1`, in order of first
        // member; in an ultrametric each class is exactly the pivot's
        // neighborhood.
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut remaining = active.clone();
        while let Some(&pivot) = remaining.first() {
            let (class, rest): (Vec<usize>, Vec<usize>) = remaining
                .iter()
                .partition(|&&x| x == pivot || dist[pivot][x] < diam);
            classes.push(class);
            remaining = rest;
        }
        if classes.len() != 2 {
            return Ok(None);
        }
        let singleton_idx = match (classes[0].len(), classes[1].len()) {
            (1, 1) => 1, // both singletons: peel the canonically later one
            (1, _) => 0,
            (_, 1) => 1,
            _ => return Ok(None),
        };
        let single = classes[singleton_idx][0];
        peeled.push(single);
        active = classes[1 - singleton_idx].clone();
    }
    let mut order = vec![active[0]];
    order.extend(peeled.into_iter().rev());

    // Minimal enclosing witnesses: the prefix diameter measured from the
    // first element (any point of an ultrametric ball is a center). The
    // one-element prefix uses a radius below the nearest neighbor.
    let first = order[0];
    let min_to_rest = (0..n).filter(|&x| x != first).map(|x| dist[first][x]).min().unwrap();
    let mut witnesses = Vec::with_capacity(n);
    let mut radius = min_to_rest - 1;
    for (j, &idx) in order.iter().enumerate() {
        if j > 0 {
            radius = radius.max(dist[first][idx]);
        }
        witnesses.push(Ball::new(elems[first].clone(), radius));
    }
    let elements: Vec<T> = order.into_iter().map(|i| elems[i].clone()).collect();
    let cert = SeparableCertificate { elements, witnesses };
    debug_assert!(verify_separable(&cert).is_ok());
    Ok(Some(cert))
}

/// Keeps one element per distinct critical ball along a chain (the first,
/// i.e. canonically least, member of each run), producing a separable set of
/// size at least `⌈|C| / base⌉` since each ball class has at most `base`
/// members.
pub fn extract_separable<T: ValuedElement>(chain: &ChainCertificate<T>) -> SeparableCertificate<T> {
    let mut elements = Vec::new();
    let mut witnesses: Vec<Ball<T>> = Vec::new();
    let mut last_key: Option<BallKey<T>> = None;
    for (elem, ball) in chain.elements.iter().zip(&chain.balls) {
        let key = ball.key();
        if last_key.as_ref() != Some(&key) {
            elements.push(elem.clone());
            witnesses.push(ball.clone());
            last_key = Some(key);
        }
    }
    SeparableCertificate { elements, witnesses }
}

/// Re-verifies a chain certificate against its set from first principles:
/// distinct members of the set, correct critical balls, nested in order.
pub fn verify_chain<T: ValuedElement>(
    set: &FiniteSet<T>,
    cert: &ChainCertificate<T>,
) -> Result<(), CertificateError> {
    if cert.is_empty() {
        return Err(CertificateError::EmptyCertificate);
    }
    if cert.elements.len() != cert.balls.len() {
        return Err(CertificateError::LengthMismatch {
            elements: cert.elements.len(),
            balls: cert.balls.len(),
        });
    }
    let mut seen = std::collections::HashSet::new();
    for e in &cert.elements {
        if !set.contains(e) {
            return Err(CertificateError::NotInSet(e.to_string()));
        }
        if !seen.insert(e.clone()) {
            return Err(CertificateError::DuplicateElement(e.to_string()));
        }
    }
    let assignment = critical_balls(set).map_err(|e| match e {
        GeometryError::Singleton => CertificateError::NotInSet("set is a singleton".into()),
        GeometryError::Ambient(a) => CertificateError::Ambient(a),
    })?;
    for (e, b) in cert.elements.iter().zip(&cert.balls) {
        let reference = assignment.get(e).expect("element is in the set");
        if reference.rexp != b.rexp() || !reference.ball.same_points(b) {
            return Err(CertificateError::WrongCriticalBall { element: e.to_string() });
        }
    }
    for i in 0..cert.balls.len() - 1 {
        let rel = ball_compare(&cert.balls[i], &cert.balls[i + 1])?;
        if !matches!(rel, BallRelation::Equal | BallRelation::Subset) {
            return Err(CertificateError::NotNested { index: i });
        }
    }
    Ok(())
}

/// Re-verifies a separable certificate against the definition by direct
/// membership testing: witness j captures exactly the first j elements.
pub fn verify_separable<T: ValuedElement>(
    cert: &SeparableCertificate<T>,
) -> Result<(), CertificateError> {
    if cert.is_empty() {
        return Err(CertificateError::EmptyCertificate);
    }
    if cert.elements.len() != cert.witnesses.len() {
        return Err(CertificateError::LengthMismatch {
            elements: cert.elements.len(),
            balls: cert.witnesses.len(),
        });
    }
    let mut seen = std::collections::HashSet::new();
    for e in &cert.elements {
        if !seen.insert(e.clone()) {
            return Err(CertificateError::DuplicateElement(e.to_string()));
        }
    }
    for (j, witness) in cert.witnesses.iter().enumerate() {
        for (i, e) in cert.elements.iter().enumerate() {
            let inside = witness.contains(e)?;
            if inside != (i <= j) {
                return Err(CertificateError::WitnessMismatch { index: j + 1 });
            }
        }
    }
    Ok(())
}

/// Rebuilds a chain certificate from bare elements (e.g. parsed from disk),
/// recomputing each critical ball and verifying the nesting.
pub fn chain_from_elements<T: ValuedElement>(
    set: &FiniteSet<T>,
    elements: Vec<T>,
) -> Result<ChainCertificate<T>, CertificateError> {
    if elements.is_empty() {
        return Err(CertificateError::EmptyCertificate);
    }
    let assignment = critical_balls(set).map_err(|e| match e {
        GeometryError::Singleton => CertificateError::NotInSet("set is a singleton".into()),
        GeometryError::Ambient(a) => CertificateError::Ambient(a),
    })?;
    let mut balls = Vec::with_capacity(elements.len());
    for e in &elements {
        let cb = assignment
            .get(e)
            .ok_or_else(|| CertificateError::NotInSet(e.to_string()))?;
        balls.push(Ball::new(e.clone(), cb.rexp));
    }
    let cert = ChainCertificate { elements, balls };
    verify_chain(set, &cert)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::valued::{Laurent, Padic};
    use std::sync::Arc;

    fn f2() -> Arc<FieldSpec> {
        Arc::new(FieldSpec::prime(2).unwrap())
    }

    fn t_pow(spec: &Arc<FieldSpec>, e: i64) -> Laurent {
        Laurent::monomial(spec, e, 1).unwrap()
    }

    fn monomial_family(n: i64) -> FiniteSet<Laurent> {
        let spec = f2();
        FiniteSet::new((0..=n).map(|j| t_pow(&spec, j)).collect()).unwrap()
    }

    #[test]
    fn contains_examples() {
        let spec = f2();
        let b = Ball::new(t_pow(&spec, 1), 1);
        assert!(b.contains(&Laurent::zero(&spec)).unwrap());
        assert!(b.contains(b.center()).unwrap());
        assert!(!b.contains(&t_pow(&spec, 2)).unwrap());
    }

    #[test]
    fn every_critical_ball_of_the_monomial_family_contains_zero() {
        let a = monomial_family(10);
        let cb = critical_balls(&a).unwrap();
        let zero = Laurent::zero(&f2());
        for item in cb.items() {
            assert!(item.ball.contains(&zero).unwrap());
        }
    }

    #[test]
    fn compare_examples() {
        let spec = f2();
        let b1 = Ball::new(Laurent::constant(&spec, 1), 1);
        let b2 = Ball::new(t_pow(&spec, 1), 1);
        assert_eq!(ball_compare(&b1, &b2).unwrap(), BallRelation::Equal);
        assert!(b1.same_points(&b2));

        let far = Ball::new(t_pow(&spec, 3), 1);
        assert_eq!(
            ball_compare(&Ball::new(Laurent::zero(&spec), 1), &far).unwrap(),
            BallRelation::Disjoint
        );

        let big = Ball::new(t_pow(&spec, 2), 2);
        assert_eq!(ball_compare(&b1, &big).unwrap(), BallRelation::Subset);
        assert_eq!(ball_compare(&big, &b1).unwrap(), BallRelation::Superset);
    }

    #[test]
    fn critical_ball_examples() {
        let spec = f2();
        let a = FiniteSet::new(vec![
            Laurent::constant(&spec, 1),
            t_pow(&spec, 1),
            t_pow(&spec, 2),
        ])
        .unwrap();
        let cb = critical_balls(&a).unwrap();
        let r = |x: &Laurent| cb.get(x).unwrap().rexp;
        assert_eq!(r(&Laurent::constant(&spec, 1)), 1);
        assert_eq!(r(&t_pow(&spec, 1)), 1);
        assert_eq!(r(&t_pow(&spec, 2)), 2);
        // B_A(1) = B_A(t).
        assert!(cb
            .get(&Laurent::constant(&spec, 1))
            .unwrap()
            .ball
            .same_points(&cb.get(&t_pow(&spec, 1)).unwrap().ball));

        // Two-element sets: both radii equal the pairwise distance.
        let two = FiniteSet::new(vec![Laurent::constant(&spec, 1), t_pow(&spec, 3)]).unwrap();
        let cb2 = critical_balls(&two).unwrap();
        assert!(cb2.items().iter().all(|i| i.rexp == 3));

        let single = FiniteSet::new(vec![Laurent::zero(&spec)]).unwrap();
        assert!(matches!(
            critical_balls(&single),
            Err(GeometryError::Singleton)
        ));
    }

    #[test]
    fn monomial_family_critical_balls_match_the_norm_balls() {
        // B(t^j, q^j) for j >= 1, and the j = 0 ball coincides with j = 1.
        let a = monomial_family(10);
        let cb = critical_balls(&a).unwrap();
        let spec = f2();
        for j in 1..=10 {
            let item = cb.get(&t_pow(&spec, j)).unwrap();
            assert_eq!(item.rexp, j);
        }
        let one = cb.get(&Laurent::constant(&spec, 1)).unwrap();
        let t = cb.get(&t_pow(&spec, 1)).unwrap();
        assert_eq!(one.rexp, 1);
        assert!(one.ball.same_points(&t.ball));
    }

    #[test]
    fn forest_examples() {
        let spec = f2();
        let a = FiniteSet::new(vec![
            Laurent::constant(&spec, 1),
            t_pow(&spec, 1),
            t_pow(&spec, 2),
        ])
        .unwrap();
        let forest = build_forest(&critical_balls(&a).unwrap());
        assert_eq!(forest.nodes().len(), 2);
        assert_eq!(forest.total_weight(), 3);
        let root = forest.roots()[0];
        assert_eq!(forest.nodes()[root].weight(), 1);
        assert_eq!(forest.nodes()[root].children.len(), 1);
        let child = forest.nodes()[root].children[0];
        assert_eq!(forest.nodes()[child].weight(), 2);

        // The monomial family gives a single path of 10 nodes: root weight 1,
        // deepest node weight 2.
        let big = monomial_family(10);
        let forest = build_forest(&critical_balls(&big).unwrap());
        assert_eq!(forest.nodes().len(), 10);
        assert_eq!(forest.roots().len(), 1);
        let mut idx = forest.roots()[0];
        assert_eq!(forest.nodes()[idx].weight(), 1);
        let mut depth = 1;
        while let Some(&c) = forest.nodes()[idx].children.first() {
            assert_eq!(forest.nodes()[idx].children.len(), 1);
            idx = c;
            depth += 1;
        }
        assert_eq!(depth, 10);
        assert_eq!(forest.nodes()[idx].weight(), 2);
        assert_eq!(forest.max_class_size(), 2);
    }

    #[test]
    fn all_equal_balls_collapse_to_one_node() {
        let spec = Arc::new(FieldSpec::prime(3).unwrap());
        let a = FiniteSet::new(vec![
            Laurent::zero(&spec),
            Laurent::constant(&spec, 1),
            Laurent::constant(&spec, 2),
        ])
        .unwrap();
        let forest = build_forest(&critical_balls(&a).unwrap());
        assert_eq!(forest.nodes().len(), 1);
        assert_eq!(forest.nodes()[0].weight(), 3);
        let chain = longest_chain(&forest);
        assert_eq!(chain.len(), 3);
    }

    #[test]
    fn longest_chain_examples() {
        let a = monomial_family(10);
        let chain = longest_chain(&build_forest(&critical_balls(&a).unwrap()));
        assert_eq!(chain.len(), 11);
        verify_chain(&a, &chain).unwrap();

        let spec = f2();
        let small = FiniteSet::new(vec![
            Laurent::constant(&spec, 1),
            t_pow(&spec, 1),
            t_pow(&spec, 2),
        ])
        .unwrap();
        let chain = longest_chain(&build_forest(&critical_balls(&small).unwrap()));
        assert_eq!(chain.len(), 3);
        verify_chain(&small, &chain).unwrap();
    }

    #[test]
    fn disjoint_balls_chain_is_the_heaviest_node() {
        // {0, 1, t^3, t^3 + 1} over F_3: pairs at distance 0 far apart.
        let spec = Arc::new(FieldSpec::prime(3).unwrap());
        let a = FiniteSet::new(vec![
            Laurent::zero(&spec),
            Laurent::constant(&spec, 1),
            t_pow(&spec, 3),
            t_pow(&spec, 3).try_add(&Laurent::constant(&spec, 1)).unwrap(),
        ])
        .unwrap();
        let forest = build_forest(&critical_balls(&a).unwrap());
        let chain = longest_chain(&forest);
        assert_eq!(chain.len() as u64, forest.max_class_size());
        verify_chain(&a, &chain).unwrap();
    }

    #[test]
    fn chain_bound_values() {
        // 16^5 / (2^7 · 16^2 · 16^2 · 4^3) = 1/512.
        let b = chain_bound(16, 16, 16).unwrap();
        assert_eq!(b, BigRational::new(BigInt::from(1), BigInt::from(512)));

        // |A| = 2 uses log2 = 1: 32 / (2^7 S^2 P^2).
        let b = chain_bound(2, 3, 4).unwrap();
        assert_eq!(
            b,
            BigRational::new(BigInt::from(32), BigInt::from(128 * 9 * 16))
        );

        assert_eq!(chain_bound(1, 1, 1), Err(GeometryError::Singleton));
    }

    #[test]
    fn chain_meets_its_bound_on_examples() {
        for n in [2, 5, 10] {
            let a = monomial_family(n);
            let s = crate::sumset::sumset(&a, &a).unwrap();
            let p = crate::sumset::productset(&a, &a).unwrap();
            let bound = chain_bound(a.len(), s.len(), p.len()).unwrap();
            let chain = longest_chain(&build_forest(&critical_balls(&a).unwrap()));
            assert!(BigRational::from(BigInt::from(chain.len() as u64)) >= bound);
        }
    }

    #[test]
    fn separability_examples() {
        let spec = f2();
        // {0, 1, t} is separable with order (0, 1, t).
        let s = FiniteSet::new(vec![
            Laurent::zero(&spec),
            Laurent::constant(&spec, 1),
            t_pow(&spec, 1),
        ])
        .unwrap();
        let cert = is_separable(&s).unwrap().expect("separable");
        verify_separable(&cert).unwrap();
        assert_eq!(cert.elements[2], t_pow(&spec, 1));

        // Singletons and pairs are always separable.
        let single = FiniteSet::new(vec![t_pow(&spec, 5)]).unwrap();
        verify_separable(&is_separable(&single).unwrap().unwrap()).unwrap();
        let pair = FiniteSet::new(vec![t_pow(&spec, 5), t_pow(&spec, 2)]).unwrap();
        verify_separable(&is_separable(&pair).unwrap().unwrap()).unwrap();

        // {1, t, t+1}: the pair {t, t+1} is closer to each other than to 1.
        let s = FiniteSet::new(vec![
            Laurent::constant(&spec, 1),
            t_pow(&spec, 1),
            t_pow(&spec, 1).try_add(&Laurent::constant(&spec, 1)).unwrap(),
        ])
        .unwrap();
        let cert = is_separable(&s).unwrap().expect("separable");
        verify_separable(&cert).unwrap();

        // {0, 1, t, t+1} splits into two 2-clusters: not separable.
        let s = FiniteSet::new(vec![
            Laurent::zero(&spec),
            Laurent::constant(&spec, 1),
            t_pow(&spec, 1),
            t_pow(&spec, 1).try_add(&Laurent::constant(&spec, 1)).unwrap(),
        ])
        .unwrap();
        assert!(is_separable(&s).unwrap().is_none());

        // {0, 1, 2} over F_3 is a single class of three: not separable.
        let f3 = Arc::new(FieldSpec::prime(3).unwrap());
        let s = FiniteSet::new(vec![
            Laurent::zero(&f3),
            Laurent::constant(&f3, 1),
            Laurent::constant(&f3, 2),
        ])
        .unwrap();
        assert!(is_separable(&s).unwrap().is_none());
    }

    #[test]
    fn separability_matches_exhaustive_search_on_small_sets() {
        let spec = f2();
        let f3 = Arc::new(FieldSpec::prime(3).unwrap());
        let mut sets: Vec<FiniteSet<Laurent>> = Vec::new();
        // All subsets of size <= 5 of a small F_2 window.
        let universe: Vec<Laurent> = (0..6)
            .map(|i| {
                let mut x = Laurent::zero(&spec);
                for bit in 0..3 {
                    if (i >> bit) & 1 == 1 {
                        x = x.try_add(&t_pow(&spec, bit as i64)).unwrap();
                    }
                }
                x
            })
            .collect();
        for mask in 1u32..(1 << universe.len()) {
            if mask.count_ones() as usize > 5 {
                continue;
            }
            let subset: Vec<Laurent> = universe
                .iter()
                .enumerate()
                .filter(|(i, _)| (mask >> i) & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect();
            sets.push(FiniteSet::new(subset).unwrap());
        }
        // A few F_3 sets.
        sets.push(
            FiniteSet::new(vec![
                Laurent::zero(&f3),
                Laurent::constant(&f3, 1),
                Laurent::constant(&f3, 2),
                Laurent::monomial(&f3, 1, 1).unwrap(),
            ])
            .unwrap(),
        );
        sets.push(
            FiniteSet::new(vec![
                Laurent::constant(&f3, 1),
                Laurent::monomial(&f3, 1, 1).unwrap(),
                Laurent::monomial(&f3, 2, 1).unwrap(),
            ])
            .unwrap(),
        );
        for s in sets {
            let fast = is_separable(&s).unwrap();
            let slow = crate::oracle::separable_exhaustive(&s).unwrap();
            assert_eq!(fast.is_some(), slow.is_some(), "set {:?}", s.elements());
            if let Some(cert) = fast {
                verify_separable(&cert).unwrap();
            }
        }
    }

    #[test]
    fn extraction_examples() {
        let a = monomial_family(10);
        let chain = longest_chain(&build_forest(&critical_balls(&a).unwrap()));
        let sep = extract_separable(&chain);
        assert_eq!(sep.len(), 10); // classes {1, t} merge
        verify_separable(&sep).unwrap();
        // ceil(11 / 2) = 6 <= 10.
        assert!(sep.len() as u64 >= (chain.len() as u64).div_ceil(a.base()));
        // The extracted set passes the separability decision.
        let extracted = FiniteSet::new(sep.elements.clone()).unwrap();
        assert!(is_separable(&extracted).unwrap().is_some());

        // All balls distinct: extraction keeps the whole chain. (Chains out
        // of `longest_chain` always bottom out in a weight-2 leaf, so use a
        // hand-picked sub-chain.)
        let spec = f2();
        let sub = chain_from_elements(
            &a,
            vec![t_pow(&spec, 2), t_pow(&spec, 5), t_pow(&spec, 8)],
        )
        .unwrap();
        let sep = extract_separable(&sub);
        assert_eq!(sep.len(), sub.len());
        verify_separable(&sep).unwrap();

        // All balls equal: extraction keeps one element.
        let f3 = Arc::new(FieldSpec::prime(3).unwrap());
        let c = FiniteSet::new(vec![
            Laurent::zero(&f3),
            Laurent::constant(&f3, 1),
            Laurent::constant(&f3, 2),
        ])
        .unwrap();
        let chain = longest_chain(&build_forest(&critical_balls(&c).unwrap()));
        assert_eq!(chain.len(), 3);
        let sep = extract_separable(&chain);
        assert_eq!(sep.len(), 1);
        verify_separable(&sep).unwrap();
    }

    #[test]
    fn longest_chain_matches_exhaustive_search_on_small_sets() {
        let spec = f2();
        let mut sets = vec![
            monomial_family(4),
            FiniteSet::new(vec![
                Laurent::zero(&spec),
                Laurent::constant(&spec, 1),
                t_pow(&spec, 1),
                t_pow(&spec, 1).try_add(&Laurent::constant(&spec, 1)).unwrap(),
                t_pow(&spec, 3),
            ])
            .unwrap(),
        ];
        let p3 = |n: i64| Padic::from_integer(3, n).unwrap();
        sets.push(monomial_family(7));
        let padic_set = FiniteSet::new((0..9).map(p3).collect()).unwrap();
        let chain = longest_chain(&build_forest(&critical_balls(&padic_set).unwrap()));
        assert_eq!(
            chain.len(),
            crate::oracle::longest_chain_exhaustive(&padic_set).unwrap()
        );
        for s in sets {
            let chain = longest_chain(&build_forest(&critical_balls(&s).unwrap()));
            assert_eq!(chain.len(), crate::oracle::longest_chain_exhaustive(&s).unwrap());
            verify_chain(&s, &chain).unwrap();
        }
    }

    #[test]
    fn corrupted_certificates_fail_verification() {
        let a = monomial_family(5);
        let chain = longest_chain(&build_forest(&critical_balls(&a).unwrap()));

        let mut reversed = chain.clone();
        reversed.elements.reverse();
        reversed.balls.reverse();
        assert!(verify_chain(&a, &reversed).is_err());

        let mut foreign = chain.clone();
        foreign.elements[0] = Laurent::monomial(&f2(), 99, 1).unwrap();
        assert!(verify_chain(&a, &foreign).is_err());

        let sep = extract_separable(&chain);
        let mut swapped = sep.clone();
        swapped.elements.swap(0, 1);
        assert!(verify_separable(&swapped).is_err());
    }

    #[test]
    fn padic_chain_geometry() {
        // {p^j : 0 <= j <= 6} over Q_3 forms one descending path.
        let a = FiniteSet::new(
            (0..=6u32)
                .map(|j| Padic::new(3, BigInt::from(3u32).pow(j), 0).unwrap())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let forest = build_forest(&critical_balls(&a).unwrap());
        let chain = longest_chain(&forest);
        assert_eq!(chain.len(), 7);
        verify_chain(&a, &chain).unwrap();
        let sep = extract_separable(&chain);
        verify_separable(&sep).unwrap();
        assert!(sep.len() as u64 >= (chain.len() as u64).div_ceil(3));
    }
}
