//! Partition similarity: Rand / adjusted Rand index, normalized mutual
//! information, and the LFK variant of NMI built from per-community binary
//! indicators.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::Clustering;

/// Sparse co-assignment counts between two partitions of the same node set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTable {
    /// Non-zero cells `(row, col) -> count`, ordered by row then column.
    cells: BTreeMap<(usize, usize), usize>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    n: usize,
}

impl ContingencyTable {
    pub fn new(x: &Clustering, y: &Clustering) -> Result<Self> {
        check_same_nodes(x, y)?;
        let mut cells = BTreeMap::new();
        for (&a, &b) in x.assignment().iter().zip(y.assignment()) {
            *cells.entry((a, b)).or_insert(0) += 1;
        }
        Ok(ContingencyTable {
            cells,
            row_sums: x.community_sizes().to_vec(),
            col_sums: y.community_sizes().to_vec(),
            n: x.node_count(),
        })
    }

    pub fn count(&self, row: usize, col: usize) -> usize {
        self.cells.get(&(row, col)).copied().unwrap_or(0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.cells.iter().map(|(&(r, c), &n)| (r, c, n))
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Both partitions identical up to community relabeling.
    fn is_bijective(&self) -> bool {
        self.cells.len() == self.row_sums.len() && self.cells.len() == self.col_sums.len()
    }
}

fn check_same_nodes(x: &Clustering, y: &Clustering) -> Result<()> {
    if x.node_count() != y.node_count() {
        return Err(Error::InvalidClustering(format!(
            "partitions cover {} and {} nodes",
            x.node_count(),
            y.node_count()
        )));
    }
    Ok(())
}

fn choose2(k: usize) -> u64 {
    let k = k as u64;
    k * k.saturating_sub(1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairCounts {
    /// Same community in both.
    pub n11: u64,
    /// Different communities in both.
    pub n00: u64,
    /// Together in X only.
    pub n10: u64,
    /// Together in Y only.
    pub n01: u64,
    pub n: usize,
}

impl PairCounts {
    pub fn from_table(table: &ContingencyTable) -> Self {
        let n11: u64 = table.nonzero().map(|(_, _, c)| choose2(c)).sum();
        let together_x: u64 = table.row_sums().iter().map(|&a| choose2(a)).sum();
        let together_y: u64 = table.col_sums().iter().map(|&b| choose2(b)).sum();
        let n10 = together_x - n11;
        let n01 = together_y - n11;
        let n00 = choose2(table.n()) - n11 - n10 - n01;
        PairCounts {
            n11,
            n00,
            n10,
            n01,
            n: table.n(),
        }
    }
}

/// Pair categories from the contingency table in `O(K·L)`.
pub fn pair_counts(x: &Clustering, y: &Clustering) -> Result<PairCounts> {
    Ok(PairCounts::from_table(&ContingencyTable::new(x, y)?))
}

pub fn rand_index(pairs: &PairCounts) -> Result<f64> {
    if pairs.n < 2 {
        return Err(Error::Metric("Rand index needs at least two nodes".into()));
    }
    Ok((pairs.n00 + pairs.n11) as f64 / choose2(pairs.n) as f64)
}

/// `2(n00·n11 − n01·n10) / ((n00+n01)(n01+n11) + (n00+n10)(n10+n11))`,
/// evaluated in exact integer arithmetic. A zero denominator only arises for
/// identical trivial partitions and yields 1.
pub fn adjusted_rand_index(pairs: &PairCounts) -> Result<f64> {
    if pairs.n < 2 {
        return Err(Error::Metric(
            "adjusted Rand index needs at least two nodes".into(),
        ));
    }
    let (n11, n00, n10, n01) = (
        pairs.n11 as i128,
        pairs.n00 as i128,
        pairs.n10 as i128,
        pairs.n01 as i128,
    );
    let num = 2 * (n00 * n11 - n01 * n10);
    let den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
    if den == 0 {
        return Ok(1.0);
    }
    Ok(num as f64 / den as f64)
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

fn entropy_of_counts(counts: &[usize], n: usize) -> f64 {
    let n = n as f64;
    -counts.iter().map(|&c| plogp(c as f64 / n)).sum::<f64>()
}

/// Mutual information in bits.
pub fn mutual_information(table: &ContingencyTable) -> f64 {
    let n = table.n() as f64;
    table
        .nonzero()
        .map(|(r, c, count)| {
            let pxy = count as f64 / n;
            let px = table.row_sums()[r] as f64 / n;
            let py = table.col_sums()[c] as f64 / n;
            pxy * (pxy / (px * py)).log2()
        })
        .sum()
}

/// `I(X,Y) / sqrt(H(X)·H(Y))`. Two zero entropies give 1, exactly one gives 0.
pub fn nmi(table: &ContingencyTable) -> f64 {
    let hx = entropy_of_counts(table.row_sums(), table.n());
    let hy = entropy_of_counts(table.col_sums(), table.n());
    match (hx > 0.0, hy > 0.0) {
        (false, false) => 1.0,
        (true, false) | (false, true) => 0.0,
        (true, true) => {
            if table.is_bijective() {
                return 1.0;
            }
            (mutual_information(table) / (hx * hy).sqrt()).clamp(0.0, 1.0)
        }
    }
}

/// Entropy of a binary indicator covering `k` of `n` nodes. Both
/// probabilities come from integer counts so that they cancel exactly
/// against the joint terms.
fn binary_entropy(k: usize, n: usize) -> f64 {
    let nf = n as f64;
    -(plogp(k as f64 / nf) + plogp((n - k) as f64 / nf))
}

/// `H(X_k | Y_l)` for indicator variables of sizes `a`, `b` sharing `c`
/// nodes, or `None` when the pair fails the complementarity constraint
/// `h(P11) + h(P00) > h(P01) + h(P10)`.
fn indicator_conditional_entropy(a: usize, b: usize, c: usize, n: usize) -> Option<f64> {
    let nf = n as f64;
    let p11 = c as f64 / nf;
    let p10 = (a - c) as f64 / nf;
    let p01 = (b - c) as f64 / nf;
    let p00 = (n + c - a - b) as f64 / nf;
    let (h11, h10, h01, h00) = (-plogp(p11), -plogp(p10), -plogp(p01), -plogp(p00));
    if h11 + h00 <= h01 + h10 {
        return None;
    }
    let joint = h11 + h10 + h01 + h00;
    Some(joint - binary_entropy(b, n))
}

/// Normalized conditional entropy `H(X|Y)_norm` of the LFK variant.
///
/// For each community `k` of X the best-matching community of Y is the one
/// minimizing `H(X_k|Y_l)` among pairs passing the complementarity
/// constraint; with no admissible `l` the term falls back to `H(X_k)`.
/// A community covering every node has `H(X_k) = 0` and contributes 1.
pub fn lfk_conditional_entropy(x: &Clustering, y: &Clustering) -> Result<f64> {
    let table = ContingencyTable::new(x, y)?;
    Ok(conditional_entropy_from_table(&table))
}

fn conditional_entropy_from_table(table: &ContingencyTable) -> f64 {
    let n = table.n();
    let rows = table.row_sums();
    let cols = table.col_sums();
    if rows.is_empty() {
        return 0.0;
    }

    // Pairs with no overlap depend only on the column size, so they are
    // evaluated once per distinct size.
    let mut cols_by_size: BTreeMap<usize, usize> = BTreeMap::new();
    for &b in cols {
        *cols_by_size.entry(b).or_insert(0) += 1;
    }
    let mut overlaps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); rows.len()];
    for (r, c, count) in table.nonzero() {
        overlaps[r].push((c, count));
    }

    let mut total = 0.0;
    for (k, &a) in rows.iter().enumerate() {
        let hk = binary_entropy(a, n);
        if hk <= 0.0 {
            total += 1.0;
            continue;
        }
        let mut best: Option<f64> = None;
        let mut consider = |v: Option<f64>| {
            if let Some(v) = v {
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        };
        let mut overlapping_sizes: HashMap<usize, usize> = HashMap::new();
        for &(l, c) in &overlaps[k] {
            *overlapping_sizes.entry(cols[l]).or_insert(0) += 1;
            consider(indicator_conditional_entropy(a, cols[l], c, n));
        }
        for (&b, &count) in &cols_by_size {
            if count > overlapping_sizes.get(&b).copied().unwrap_or(0) {
                consider(indicator_conditional_entropy(a, b, 0, n));
            }
        }
        let conditional = best.unwrap_or(hk);
        total += (conditional / hk).clamp(0.0, 1.0);
    }
    total / rows.len() as f64
}

fn transpose(table: &ContingencyTable) -> ContingencyTable {
    ContingencyTable {
        cells: table
            .cells
            .iter()
            .map(|(&(r, c), &n)| ((c, r), n))
            .collect(),
        row_sums: table.col_sums.clone(),
        col_sums: table.row_sums.clone(),
        n: table.n,
    }
}

/// `1 − ½[H(X|Y)_norm + H(Y|X)_norm]`.
pub fn lfk_nmi(x: &Clustering, y: &Clustering) -> Result<f64> {
    let table = ContingencyTable::new(x, y)?;
    let hxy = conditional_entropy_from_table(&table);
    let hyx = conditional_entropy_from_table(&transpose(&table));
    Ok((1.0 - 0.5 * (hxy + hyx)).clamp(0.0, 1.0))
}

/// The three information-recovery metrics for one (found, truth) pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoveryScores {
    pub ari: f64,
    pub nmi: f64,
    pub lfk_nmi: f64,
}

pub fn recovery_scores(found: &Clustering, truth: &Clustering) -> Result<RecoveryScores> {
    let table = ContingencyTable::new(found, truth)?;
    let pairs = PairCounts::from_table(&table);
    Ok(RecoveryScores {
        ari: adjusted_rand_index(&pairs)?,
        nmi: nmi(&table),
        lfk_nmi: lfk_nmi(found, truth)?,
    })
}
