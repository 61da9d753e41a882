//! Koszul signs and the index combinatorics of coalgebra formulas.

use crate::error::{Error, Result};

fn check_perm(perm: &[usize], degrees: &[i32]) -> Result<()> {
    if perm.len() != degrees.len() {
        return Err(Error::structural(format!(
            "permutation of length {} with {} degrees",
            perm.len(),
            degrees.len()
        )));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::structural(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

fn inversion_sign(perm: &[usize], degrees: &[i32], exterior: bool) -> bool {
    let mut negative = false;
    for a in 0..perm.len() {
        for b in (a + 1)..perm.len() {
            if perm[a] > perm[b] {
                let odd = (degrees[perm[a]] * degrees[perm[b]]).rem_euclid(2) == 1;
                negative ^= odd ^ exterior;
            }
        }
    }
    negative
}

/// Sign of reordering `a_0..a_{n-1}` into `a_{perm[0]}..a_{perm[n-1]}` in the
/// graded exterior algebra: an adjacent swap of degrees `d1, d2` costs
/// `−(−1)^{d1 d2}`. Returns `true` for −1.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> Result<bool> {
    check_perm(perm, degrees)?;
    Ok(inversion_sign(perm, degrees, true))
}

/// Same reordering in the graded symmetric algebra: a swap costs
/// `(−1)^{d1 d2}`.
pub fn koszul_sign_symmetric(perm: &[usize], degrees: &[i32]) -> Result<bool> {
    check_perm(perm, degrees)?;
    Ok(inversion_sign(perm, degrees, false))
}

pub(crate) fn symmetric_sign(perm: &[usize], degrees: &[i32]) -> bool {
    inversion_sign(perm, degrees, false)
}

/// `(i, j)`-unshuffles as reorderings: the first `i` entries and the last `j`
/// entries are each increasing.
pub fn unshuffles(i: usize, j: usize) -> Vec<Vec<usize>> {
    let n = i + j;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(i);
    fn rec(start: usize, n: usize, i: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chosen.len() == i {
            let mut perm = chosen.clone();
            perm.extend((0..n).filter(|k| !chosen.contains(k)));
            out.push(perm);
            return;
        }
        for k in start..n {
            if n - k < i - chosen.len() {
                break;
            }
            chosen.push(k);
            rec(k + 1, n, i, chosen, out);
            chosen.pop();
        }
    }
    rec(0, n, i, &mut chosen, &mut out);
    out
}

/// Set partitions of `0..n`, blocks increasing and ordered by their least
/// element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for b in 0..p.len() {
                let mut q: Vec<Vec<usize>> = p.clone();
                q[b].push(k);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![k]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// Sign relating an antisymmetric map on `V` to its symmetric counterpart on
/// `V[1]`: `(−1)^{n(n−1)/2 + Σ_i (n−i)|a_i|}` on unshifted degrees.
pub fn decalage_negative(degrees: &[i32]) -> bool {
    let n = degrees.len();
    let mut e = (n * n.saturating_sub(1) / 2) as i64;
    for (k, d) in degrees.iter().enumerate() {
        e += (n - 1 - k) as i64 * *d as i64;
    }
    e.rem_euclid(2) == 1
}
