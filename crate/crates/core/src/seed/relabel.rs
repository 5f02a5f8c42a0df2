//! Seed equivalence up to relabeling and canonical keys.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::Seed;

/// Bijection from the labels of one seed to the labels of another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling(pub BTreeMap<String, String>);

impl Relabeling {
    pub fn map<'a>(&'a self, label: &str) -> Option<&'a str> {
        self.0.get(label).map(String::as_str)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|(a, b)| a == b)
    }
}

/// Attributes of a label that any relabeling must preserve.
fn intrinsic_tags(s: &Seed) -> Vec<String> {
    let lat = s.lattice();
    let m = s.mutable_lattice();
    (0..lat.len())
        .map(|i| {
            let mut row: Vec<BigInt> = (0..m.len()).map(|j| s.b().at(i, j)).collect();
            row.sort();
            let mut col: Vec<BigInt> = match m.position(lat.label(i)) {
                Some(j) => (0..lat.len()).map(|r| s.b().at(r, j)).collect(),
                None => Vec::new(),
            };
            col.sort();
            format!("{}|{}|{:?}|{:?}", u8::from(lat.is_frozen(i)), lat.d(i), row, col)
        })
        .collect()
}

/// Finds a relabeling carrying `a` onto `b` that preserves frozen flags,
/// multipliers, exchange matrix entries and the supplied per-label tags
/// (indexed by lattice position).
pub fn find_relabeling_tagged(a: &Seed, b: &Seed, tags_a: &[String], tags_b: &[String]) -> Option<Relabeling> {
    let (la, lb) = (a.lattice(), b.lattice());
    if la.len() != lb.len() || la.mutable_count() != lb.mutable_count() {
        return None;
    }
    let ia = intrinsic_tags(a);
    let ib = intrinsic_tags(b);
    let key = |i: &[String], t: &[String], x: usize| format!("{}#{}", i[x], t[x]);
    let n = la.len();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| key(&ia, tags_a, x) == key(&ib, tags_b, y)).collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if assign(a, b, &candidates, 0, &mut image, &mut used) {
        Some(Relabeling(
            (0..n).map(|x| (la.label(x).to_string(), lb.label(image[x]).to_string())).collect(),
        ))
    } else {
        None
    }
}

/// [`find_relabeling_tagged`] with no extra tags.
pub fn find_relabeling(a: &Seed, b: &Seed) -> Option<Relabeling> {
    let empty = vec![String::new(); a.lattice().len().max(b.lattice().len())];
    find_relabeling_tagged(a, b, &empty[..a.lattice().len()], &empty[..b.lattice().len()])
}

fn entry(s: &Seed, row: usize, col_pos: usize) -> Option<BigInt> {
    let lat = s.lattice();
    s.mutable_lattice().position(lat.label(col_pos)).map(|j| s.b().at(row, j))
}

fn assign(a: &Seed, b: &Seed, cand: &[Vec<usize>], x: usize, image: &mut [usize], used: &mut [bool]) -> bool {
    if x == cand.len() {
        return true;
    }
    'next: for &y in &cand[x] {
        if used[y] {
            continue;
        }
        for p in 0..x {
            let q = image[p];
            if entry(a, x, p) != entry(b, y, q) || entry(a, p, x) != entry(b, q, y) {
                continue 'next;
            }
        }
        if entry(a, x, x) != entry(b, y, y) {
            continue;
        }
        image[x] = y;
        used[y] = true;
        if assign(a, b, cand, x + 1, image, used) {
            return true;
        }
        used[y] = false;
    }
    false
}

/// A string identifying `s` up to relabeling, refined by per-label `tags`.
///
/// Labels are sorted by (frozen flag, multiplier, sorted row/column entries,
/// tag); ties are broken by trying every order within a class and keeping the
/// lexicographically least rendering of `B`.
pub fn canonical_key_tagged(s: &Seed, tags: &[String]) -> String {
    let it = intrinsic_tags(s);
    let n = s.lattice().len();
    let mut classes: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        classes.entry(format!("{}#{}", it[x], tags[x])).or_default().push(x);
    }
    let header: Vec<String> = classes.iter().flat_map(|(k, v)| std::iter::repeat_n(k.clone(), v.len())).collect();
    let groups: Vec<Vec<usize>> = classes.into_values().collect();

    let mut best: Option<String> = None;
    let mut order = Vec::with_capacity(n);
    orders(&groups, 0, &mut order, &mut |ord| {
        let body = render(s, ord);
        if best.as_ref().is_none_or(|b| body < *b) {
            best = Some(body);
        }
    });
    format!("{}::{}", header.join(";"), best.unwrap_or_default())
}

/// Key of the exchange matrix alone.
pub fn canonical_key(s: &Seed) -> String {
    canonical_key_tagged(s, &vec![String::new(); s.lattice().len()])
}

fn render(s: &Seed, ord: &[usize]) -> String {
    let mut out = String::new();
    for &r in ord {
        for &c in ord {
            if let Some(v) = entry(s, r, c) {
                out.push_str(&v.to_string());
                out.push(',');
            }
        }
        out.push('/');
    }
    out
}

fn orders(groups: &[Vec<usize>], g: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if g == groups.len() {
        f(acc);
        return;
    }
    permute(&groups[g], &mut Vec::new(), &mut vec![false; groups[g].len()], &mut |p| {
        let len = acc.len();
        acc.extend_from_slice(p);
        orders(groups, g + 1, acc, f);
        acc.truncate(len);
    });
}

fn permute(items: &[usize], acc: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
    if acc.len() == items.len() {
        f(acc);
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            acc.push(items[i]);
            permute(items, acc, used, f);
            acc.pop();
            used[i] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::fixtures;

    #[test]
    fn a2_mutations_are_b_equivalent() {
        let s = fixtures::a2();
        let m = s.mutate("1").unwrap();
        let r = find_relabeling(&s, &m).unwrap();
        assert_eq!(r.map("1"), Some("2"));
        assert_eq!(canonical_key(&s), canonical_key(&m));
        assert!(find_relabeling(&s, &s).unwrap().is_identity());
    }

    #[test]
    fn distinct_matrices_differ() {
        let a = fixtures::a2();
        let b = Seed::from_dense(&["1", "2"], &[], &[1, 1], &[vec![0, -2], vec![2, 0]]).unwrap();
        assert!(find_relabeling(&a, &b).is_none());
        assert_ne!(canonical_key(&a), canonical_key(&b));
        assert_ne!(canonical_key(&fixtures::a2()), canonical_key(&fixtures::a2f()));
    }

    #[test]
    fn key_matches_relabeling_on_markov() {
        let s = fixtures::markov();
        let m = s.mutate("2").unwrap();
        assert_eq!(canonical_key(&s), canonical_key(&m));
        assert!(find_relabeling(&s, &m).is_some());
    }
}
