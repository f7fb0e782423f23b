use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::forms::altbock::AlternatingBockstein;
use crate::forms::component::ClassComponent;
use crate::forms::quadratic::QuadraticFormF2;

/// Wire format: `{"p":2,"m":..,"coeffs":[[i,j,c],..]}` or
/// `{"p":..,"m":..,"alt":[[i,j,l],..],"bock":[..]}`, one-based indices, nonzero entries only.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentJson {
    p: u32,
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<[u64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alt: Option<Vec<[u64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bock: Option<Vec<u64>>,
}

fn to_json(c: &ClassComponent) -> ComponentJson {
    let m = c.m();
    match c {
        ClassComponent::Quadratic(q) => ComponentJson {
            p: 2,
            m,
            coeffs: Some(q.terms().map(|(i, j)| [i as u64 + 1, j as u64 + 1, 1]).collect()),
            alt: None,
            bock: None,
        },
        ClassComponent::AltBock(a) => {
            let mut alt = Vec::new();
            for i in 0..m {
                for j in i + 1..m {
                    let v = a.wedge(i, j);
                    if v != 0 {
                        alt.push([i as u64 + 1, j as u64 + 1, v as u64]);
                    }
                }
            }
            ComponentJson {
                p: a.prime().get(),
                m,
                coeffs: None,
                alt: Some(alt),
                bock: Some(a.bock().iter().map(|&b| b as u64).collect()),
            }
        }
    }
}

fn index(k: u64, m: usize) -> Result<usize> {
    if k == 0 || k as usize > m {
        return Err(Error::DimensionMismatch(format!("index {k} outside 1..{m}")));
    }
    Ok(k as usize - 1)
}

fn from_json(j: ComponentJson) -> Result<ClassComponent> {
    let p = Prime::new(j.p)?;
    let m = j.m;
    let residue = |v: u64| -> Result<i64> {
        if v >= p.get() as u64 {
            return Err(Error::EntryOutOfRange {
                value: v.min(u32::MAX as u64) as u32,
                p: p.get(),
            });
        }
        Ok(v as i64)
    };
    if p.is_odd() {
        if j.coeffs.is_some() {
            return Err(Error::InvalidInput("odd-prime components use \"alt\" and \"bock\"".into()));
        }
        let mut a = AlternatingBockstein::zero(p, m)?;
        for [i, k, l] in j.alt.unwrap_or_default() {
            let (i, k) = (index(i, m)?, index(k, m)?);
            if i >= k {
                return Err(Error::InvalidInput("alternating entries need i < j".into()));
            }
            a.add_wedge(i, k, residue(l)?)?;
        }
        let bock = j.bock.unwrap_or_else(|| vec![0; m]);
        if bock.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "Bockstein vector of length {} for m = {m}",
                bock.len()
            )));
        }
        for (i, b) in bock.into_iter().enumerate() {
            a.add_bockstein(i, residue(b)?)?;
        }
        Ok(a.into())
    } else {
        if j.alt.is_some() || j.bock.is_some() {
            return Err(Error::InvalidInput("components over F_2 use \"coeffs\"".into()));
        }
        let mut q = QuadraticFormF2::zero(m);
        for [i, k, c] in j.coeffs.unwrap_or_default() {
            let (i, k) = (index(i, m)?, index(k, m)?);
            if i > k {
                return Err(Error::InvalidInput("coefficient entries need i <= j".into()));
            }
            if residue(c)? == 1 {
                q.toggle(i, k);
            }
        }
        Ok(q.into())
    }
}

impl Serialize for ClassComponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClassComponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        from_json(ComponentJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
