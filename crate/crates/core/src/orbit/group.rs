use std::collections::{BTreeMap, HashSet};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Isomorphism-type fingerprint of a small finite group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupId {
    pub order: u64,
    pub abelian: bool,
    /// element order ↦ number of elements of that order
    pub element_orders: BTreeMap<u64, u64>,
    /// isomorphism type when the fingerprint determines it and the order is at most 16
    pub label: Option<String>,
}

impl GroupId {
    /// The label, or `order-N` when the fingerprint is not decisive.
    pub fn display_label(&self) -> String {
        self.label.clone().unwrap_or_else(|| format!("order-{}", self.order))
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        is_power_of(self.order, p)
    }
}

pub(crate) fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Largest order with named labels.
pub const MAX_LABELLED_ORDER: u64 = 16;

const NONABELIAN: &[(&str, &[(u64, u64)])] = &[
    ("S3", &[(1, 1), (2, 3), (3, 2)]),
    ("D8", &[(1, 1), (2, 5), (4, 2)]),
    ("Q8", &[(1, 1), (2, 1), (4, 6)]),
    ("D10", &[(1, 1), (2, 5), (5, 4)]),
    ("A4", &[(1, 1), (2, 3), (3, 8)]),
    ("D12", &[(1, 1), (2, 7), (3, 2), (6, 2)]),
    ("Dic12", &[(1, 1), (2, 1), (3, 2), (4, 6), (6, 2)]),
    ("D14", &[(1, 1), (2, 7), (7, 6)]),
    ("D16", &[(1, 1), (2, 9), (4, 2), (8, 4)]),
    ("SD16", &[(1, 1), (2, 5), (4, 6), (8, 4)]),
    ("Q16", &[(1, 1), (2, 1), (4, 10), (8, 4)]),
    ("M16", &[(1, 1), (2, 3), (4, 4), (8, 8)]),
    ("D8xZ/2", &[(1, 1), (2, 11), (4, 4)]),
];

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Invariant factors of a finite abelian group from its element-order counts.
fn abelian_invariants(order: u64, orders: &BTreeMap<u64, u64>) -> Vec<u64> {
    // number of x with x^d = 1
    let killed_by = |d: u64| -> u64 {
        orders
            .iter()
            .filter(|(&o, _)| d % o == 0)
            .map(|(_, &c)| c)
            .sum()
    };
    let mut factors: Vec<u64> = Vec::new();
    for q in prime_factors(order) {
        // #{x : x^{q^k} = 1} = q^{sum_i min(λ_i, k)}; successive ratios give the conjugate partition
        let mut sizes = vec![0u32];
        let mut k = 1;
        loop {
            let c = killed_by(q.pow(k));
            let e = (c as f64).log(q as f64).round() as u32;
            if e == *sizes.last().expect("nonempty") {
                break;
            }
            sizes.push(e);
            k += 1;
        }
        // parts >= k: sizes[k] - sizes[k-1]
        let conj: Vec<u32> = sizes.windows(2).map(|w| w[1] - w[0]).collect();
        let n_parts = conj.first().copied().unwrap_or(0) as usize;
        let mut parts = vec![0u32; n_parts];
        for (k, &c) in conj.iter().enumerate() {
            for part in parts.iter_mut().take(c as usize) {
                *part = k as u32 + 1;
            }
        }
        // parts is descending; merge into invariant factors (largest first)
        for (i, &lam) in parts.iter().enumerate() {
            if factors.len() <= i {
                factors.push(1);
            }
            factors[i] *= q.pow(lam);
        }
    }
    factors.sort_unstable_by(|a, b| b.cmp(a));
    factors
}

fn abelian_label(factors: &[u64]) -> String {
    match factors {
        [] => "1".into(),
        [d] => format!("Z/{d}"),
        [d, rest @ ..] if factors.len() >= 3 && rest.iter().all(|x| x == d) => {
            format!("(Z/{d})^{}", factors.len())
        }
        _ => factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect::<Vec<_>>()
            .join("x"),
    }
}

/// Label for a fingerprint, when it is decisive.
pub fn label_for(order: u64, abelian: bool, orders: &BTreeMap<u64, u64>) -> Option<String> {
    if order > MAX_LABELLED_ORDER {
        return None;
    }
    if abelian {
        return Some(abelian_label(&abelian_invariants(order, orders)));
    }
    NONABELIAN
        .iter()
        .find(|(_, fp)| fp.len() == orders.len() && fp.iter().all(|(o, c)| orders.get(o) == Some(c)))
        .map(|(name, _)| name.to_string())
}

/// Fingerprints the finite group formed by `elements` under `mul`.
///
/// `elements` must be closed under `mul`; this is checked while building a generating set.
pub fn identify_group<T, M>(elements: &[T], mul: M) -> Result<GroupId>
where
    T: Clone + Eq + Hash,
    M: Fn(&T, &T) -> T,
{
    let all: HashSet<&T> = elements.iter().collect();
    if all.len() != elements.len() || elements.is_empty() {
        return Err(Error::InvalidInput("group elements must be distinct and nonempty".into()));
    }
    let identity = elements
        .iter()
        .find(|x| mul(x, x) == **x)
        .ok_or_else(|| Error::InvalidInput("no identity element".into()))?
        .clone();
    let order = elements.len() as u64;
    let mut element_orders = BTreeMap::new();
    for x in elements {
        let mut k = 1;
        let mut y = x.clone();
        while y != identity {
            y = mul(&y, x);
            k += 1;
            if k > order {
                return Err(Error::InvalidInput("element of infinite order".into()));
            }
        }
        *element_orders.entry(k).or_insert(0) += 1;
    }
    // greedy generating set; closure under right multiplication by generators
    let mut gens: Vec<T> = Vec::new();
    let mut span: HashSet<T> = HashSet::from([identity.clone()]);
    for x in elements {
        if span.contains(x) {
            continue;
        }
        gens.push(x.clone());
        let mut frontier: Vec<T> = span.iter().cloned().collect();
        while let Some(y) = frontier.pop() {
            for g in &gens {
                let z = mul(&y, g);
                if !all.contains(&z) {
                    return Err(Error::InvalidInput("elements are not closed under the product".into()));
                }
                if span.insert(z.clone()) {
                    frontier.push(z);
                }
            }
        }
    }
    let abelian = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| mul(a, b) == mul(b, a)));
    let label = label_for(order, abelian, &element_orders);
    Ok(GroupId {
        order,
        abelian,
        element_orders,
        label,
    })
}
