use std::collections::BTreeSet;

pub type Elem = Vec<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Osp,
    Trp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub tuples: usize,
    pub raw: usize,
    pub classes: usize,
}

fn elements(orders: &[i64]) -> Vec<Elem> {
    let mut out = vec![vec![]];
    for &n in orders {
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..n).map(move |a| {
                    let mut e = e.clone();
                    e.push(a);
                    e
                })
            })
            .collect();
    }
    out
}

fn degree(orders: &[i64], a: &Elem, b: &Elem) -> Elem {
    orders
        .iter()
        .zip(a.iter().zip(b))
        .map(|(n, (x, y))| (y - x).rem_euclid(*n))
        .collect()
}

type IMat = Vec<Vec<i64>>;

fn zeros(n: usize) -> IMat {
    vec![vec![0; n]; n]
}

fn mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

fn transpose(a: &IMat) -> IMat {
    let n = a.len();
    let mut t = zeros(n);
    for i in 0..n {
        for j in 0..n {
            t[j][i] = a[i][j];
        }
    }
    t
}

/// Φ for the orthosymplectic family: identity on the even part and the
/// standard symplectic block on the odd part, or the paired form.
fn osp_phi(p: &[usize], q: &[usize]) -> Option<IMat> {
    let (n, m): (usize, usize) = (p.iter().sum(), q.iter().sum());
    let mut phi = zeros(n + m);
    if p.len() == 1 {
        if m % 2 != 0 {
            return None;
        }
        for i in 0..n {
            phi[i][i] = 1;
        }
        let h = m / 2;
        for i in 0..h {
            phi[n + i][n + h + i] = 1;
            phi[n + h + i][n + i] = -1;
        }
        return Some(phi);
    }
    if p.len() % 2 != 0 {
        return None;
    }
    let mut off = 0;
    for k in (0..p.len()).step_by(2) {
        if p[k] != p[k + 1] {
            return None;
        }
        for i in 0..p[k] {
            phi[off + i][off + p[k] + i] = 1;
            phi[off + p[k] + i][off + i] = 1;
        }
        off += 2 * p[k];
    }
    for k in (0..q.len()).step_by(2) {
        if q[k] != q[k + 1] {
            return None;
        }
        for i in 0..q[k] {
            phi[off + i][off + q[k] + i] = 1;
            phi[off + q[k] + i][off + i] = -1;
        }
        off += 2 * q[k];
    }
    Some(phi)
}

fn flip(n: usize) -> IMat {
    let mut phi = zeros(2 * n);
    for i in 0..n {
        phi[i][n + i] = 1;
        phi[n + i][i] = 1;
    }
    phi
}

/// Every E_ij goes under X ↦ Φ⁻¹X^τΦ to a matrix supported on entries of the
/// same degree. Φ is a signed permutation here, so Φ⁻¹ = Φᵗ.
fn graded(orders: &[i64], n_even: usize, theta: &[Elem], phi: &IMat) -> bool {
    let size = theta.len();
    let phi_inv = transpose(phi);
    assert_eq!(mul(&phi_inv, phi), {
        let mut id = zeros(size);
        (0..size).for_each(|i| id[i][i] = 1);
        id
    });
    for i in 0..size {
        for j in 0..size {
            let mut tau = zeros(size);
            let sign = if i < n_even && j >= n_even { -1 } else { 1 };
            tau[j][i] = sign;
            let y = mul(&mul(&phi_inv, &tau), phi);
            let want = degree(orders, &theta[i], &theta[j]);
            for a in 0..size {
                for b in 0..size {
                    if y[a][b] != 0 && degree(orders, &theta[a], &theta[b]) != want {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn ordered_distinct(items: &[Elem], r: usize) -> Vec<Vec<Elem>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for x in items {
        for tail in ordered_distinct(items, r - 1) {
            if !tail.contains(x) {
                let mut v = vec![x.clone()];
                v.extend(tail);
                out.push(v);
            }
        }
    }
    out
}

fn splits(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|a| {
            splits(total - a, parts - 1).into_iter().map(move |mut t| {
                t.insert(0, a);
                t
            })
        })
        .collect()
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    let idx: Vec<Elem> = (0..r as i64).map(|i| vec![i]).collect();
    ordered_distinct(&idx, r)
        .into_iter()
        .map(|p| p.into_iter().map(|e| e[0] as usize).collect())
        .collect()
}

fn expand(gs: &[Elem], sizes: &[usize]) -> Vec<Elem> {
    gs.iter().zip(sizes).flat_map(|(g, &k)| std::iter::repeat(g.clone()).take(k)).collect()
}

pub fn count(orders: &[i64], n: usize, m: usize, family: Family) -> Counts {
    let els = elements(orders);
    let mut tuples = 0;
    let mut raw = BTreeSet::new();
    let mut classes = BTreeSet::new();
    let mut record = |theta: Vec<Elem>, phi: IMat| {
        tuples += 1;
        let mut profile: Vec<(Elem, bool)> = theta.iter().enumerate().map(|(i, g)| (g.clone(), i >= n)).collect();
        profile.sort();
        classes.insert(profile);
        raw.insert((theta, phi));
    };
    for r in 1..=els.len().min(n + m) {
        for gs in ordered_distinct(&els, r) {
            match family {
                Family::Osp => {
                    for p in splits(n, r) {
                        for q in splits(m, r) {
                            if (0..r).any(|i| p[i] + q[i] == 0) {
                                continue;
                            }
                            let Some(phi) = osp_phi(&p, &q) else { continue };
                            let mut theta = expand(&gs, &p);
                            theta.extend(expand(&gs, &q));
                            if graded(orders, n, &theta, &phi) {
                                record(theta, phi);
                            }
                        }
                    }
                }
                Family::Trp => {
                    for perm in permutations(r) {
                        for p in splits(n, r) {
                            let mut q = vec![0; r];
                            for k in 0..r {
                                q[perm[k]] = p[k];
                            }
                            if (0..r).any(|i| p[i] + q[i] == 0) {
                                continue;
                            }
                            let mut theta = expand(&gs, &p);
                            for k in 0..r {
                                theta.extend(std::iter::repeat(gs[perm[k]].clone()).take(q[perm[k]]));
                            }
                            let phi = flip(n);
                            if graded(orders, n, &theta, &phi) {
                                record(theta, phi);
                            }
                        }
                    }
                }
            }
        }
    }
    Counts {
        tuples,
        raw: raw.len(),
        classes: classes.len(),
    }
}
