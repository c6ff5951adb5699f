use crate::combinatorics::{for_each_product, Compositions};
use crate::error::{check_dim, Result};
use crate::flow::{canonical_capacities, Capacity, EdgeSet};
use crate::wqo::{DownSet, ExtNat, ExtVec, Fin, Omega};

/// Per-state options: each entry lists `(successor, amount)` pairs.
fn row_options(p: usize, supply: ExtNat, edges: &EdgeSet) -> Vec<Vec<(usize, ExtNat)>> {
    let succ = edges.successors(p);
    match supply {
        Fin(0) => vec![Vec::new()],
        _ if succ.is_empty() => vec![Vec::new()],
        Omega => vec![succ.iter().map(|&q| (q, Omega)).collect()],
        Fin(k) => Compositions::new(k, succ.len())
            .map(|parts| succ.iter().copied().zip(parts.into_iter().map(Fin)).collect())
            .collect(),
    }
}

/// `↓{ post(f) : pre(f) ≤ x, supp(f) ⊆ E }`.
pub fn post_image_ideal(x: &ExtVec, edges: &EdgeSet) -> Result<DownSet> {
    let n = edges.states();
    check_dim(n, x.dim())?;
    let rows: Vec<_> = (0..n).map(|p| row_options(p, x.0[p], edges)).collect();
    let mut gens = Vec::new();
    for_each_product(&rows, |picked| {
        let mut g = ExtVec::zeros(n);
        for row in picked {
            for &(q, k) in row.iter() {
                g.0[q] = g.0[q] + k;
            }
        }
        gens.push(g);
        true
    });
    DownSet::canonicalize(n, gens)
}

/// Capacities whose ideals cover exactly the flows `f` with
/// `supp(f) ⊆ E` and `pre(f) ≤ y`.
pub fn flowset_from_preconstraint(y: &ExtVec, edges: &EdgeSet) -> Result<Vec<Capacity>> {
    let n = edges.states();
    check_dim(n, y.dim())?;
    let rows: Vec<_> = (0..n).map(|p| row_options(p, y.0[p], edges)).collect();
    let mut caps = Vec::new();
    for_each_product(&rows, |picked| {
        let mut c = Capacity::zero(n);
        for (p, row) in picked.iter().enumerate() {
            for &(q, k) in row.iter() {
                c.set(p, q, k);
            }
        }
        caps.push(c);
        true
    });
    canonical_capacities(n, caps)
}
