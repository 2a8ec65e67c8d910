use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::dfs::{self, Tally, Tree};
use super::EnumerationConfig;
use crate::error::{Error, Result};

/// Exact per-length counts of walks `c_n`, bridges `b_n` and irreducible
/// bridges `i_n` for `n = 0..=max_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsTable {
    pub d: usize,
    pub max_n: usize,
    pub c: Vec<BigUint>,
    pub b: Vec<BigUint>,
    /// `i[0]` is `None`: irreducibility needs positive length.
    pub i: Vec<Option<BigUint>>,
}

/// Builds the table with the default enumeration settings.
pub fn build_counts_table(max_n: usize, d: usize) -> Result<CountsTable> {
    build_counts_table_with(max_n, d, &EnumerationConfig::default())
}

pub fn build_counts_table_with(
    max_n: usize,
    d: usize,
    cfg: &EnumerationConfig,
) -> Result<CountsTable> {
    if max_n < 1 {
        return Err(Error::Precondition("max_n must be at least 1".into()));
    }
    cfg.budget.check(max_n, d)?;
    let walks = dfs::tally(d, max_n, Tree::All, cfg)?;
    let half = dfs::tally(d, max_n, Tree::HalfPlane, cfg)?;
    let mut i: Vec<Option<BigUint>> = vec![None];
    i.extend(half.irreducible[1..].iter().map(|&x| Some(BigUint::from(x))));
    let table = CountsTable {
        d,
        max_n,
        c: Tally::to_big(&walks.nodes),
        b: Tally::to_big(&half.bridges),
        i,
    };
    table.verify_invariants()?;
    Ok(table)
}

impl CountsTable {
    /// `i_k` for `k ≥ 1`, zero for `k = 0`.
    pub fn irreducible(&self, k: usize) -> BigUint {
        self.i[k].clone().unwrap_or_default()
    }

    /// Checks every structural identity the counts must satisfy.
    pub fn verify_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Inconsistent(msg));
        let n = self.max_n;
        if self.c.len() != n + 1 || self.b.len() != n + 1 || self.i.len() != n + 1 {
            return fail("sequence lengths disagree with max_n".into());
        }
        if !self.c[0].is_one() || !self.b[0].is_one() || self.i[0].is_some() {
            return fail("c_0 = b_0 = 1 and i_0 undefined".into());
        }
        if self.i[1..].iter().any(Option::is_none) {
            return fail("i_k missing for some k ≥ 1".into());
        }
        for k in 0..=n {
            if self.b[k] > self.c[k] {
                return fail(format!("b_{k} > c_{k}"));
            }
        }
        for a in 1..=n {
            for m in 1..=n - a {
                if self.c[a + m] > &self.c[a] * &self.c[m] {
                    return fail(format!("c_{} > c_{a} c_{m}", a + m));
                }
            }
        }
        for k in 1..=n {
            let conv: BigUint = (1..=k).map(|j| self.irreducible(j) * &self.b[k - j]).sum();
            if conv != self.b[k] {
                return fail(format!("b_{k} differs from the renewal convolution"));
            }
        }
        Ok(())
    }

    /// CSV with header `n,c,b,i`; `i` is empty at `n = 0`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,c,b,i\n");
        for k in 0..=self.max_n {
            let i = self.i[k].as_ref().map(|x| x.to_string()).unwrap_or_default();
            writeln!(out, "{k},{},{},{i}", self.c[k], self.b[k]).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CountsJson::from(self)).expect("counts serialize")
    }

    pub fn from_json(text: &str) -> Result<CountsTable> {
        let j: CountsJson = serde_json::from_str(text)
            .map_err(|e| Error::Precondition(format!("counts table JSON: {e}")))?;
        let parse = |s: &String| {
            s.parse::<BigUint>()
                .map_err(|_| Error::Precondition(format!("not a decimal integer: {s:?}")))
        };
        let table = CountsTable {
            d: j.d,
            max_n: j.max_n,
            c: j.c.iter().map(parse).collect::<Result<_>>()?,
            b: j.b.iter().map(parse).collect::<Result<_>>()?,
            i: j
                .i
                .iter()
                .map(|x| x.as_ref().map(parse).transpose())
                .collect::<Result<_>>()?,
        };
        table.verify_invariants()?;
        Ok(table)
    }
}

/// JSON layout: big integers as decimal strings.
#[derive(Serialize, Deserialize)]
struct CountsJson {
    d: usize,
    max_n: usize,
    c: Vec<String>,
    b: Vec<String>,
    i: Vec<Option<String>>,
}

impl From<&CountsTable> for CountsJson {
    fn from(t: &CountsTable) -> Self {
        let dec = |v: &[BigUint]| v.iter().map(BigUint::to_string).collect();
        CountsJson {
            d: t.d,
            max_n: t.max_n,
            c: dec(&t.c),
            b: dec(&t.b),
            i: t.i.iter().map(|x| x.as_ref().map(BigUint::to_string)).collect(),
        }
    }
}

/// Partial sums `S_L = Σ_{k ≤ L} i_k · mu_hat^{-k}` of the irreducible
/// bridge generating function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KestenAudit {
    pub mu_hat: f64,
    /// `partial_sums[L - 1] = S_L`.
    pub partial_sums: Vec<f64>,
}

impl KestenAudit {
    pub fn is_strictly_increasing(&self) -> bool {
        self.partial_sums.windows(2).all(|w| w[0] < w[1])
    }

    pub fn all_below_one(&self) -> bool {
        self.partial_sums.iter().all(|&s| s < 1.0)
    }

    /// CSV with header `L,S_L`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("L,S_L\n");
        for (k, s) in self.partial_sums.iter().enumerate() {
            writeln!(out, "{},{s}", k + 1).unwrap();
        }
        out
    }
}

pub fn kesten_partial_sums(table: &CountsTable, mu_hat: f64) -> Result<KestenAudit> {
    if mu_hat.is_nan() || mu_hat <= 1.0 {
        return Err(Error::Precondition(format!("mu_hat must exceed 1, got {mu_hat}")));
    }
    let mut acc = 0.0;
    let mut partial_sums = Vec::with_capacity(table.max_n);
    for k in 1..=table.max_n {
        let ik = table.irreducible(k).to_f64().unwrap_or(f64::INFINITY);
        acc += ik * mu_hat.powi(-(k as i32));
        partial_sums.push(acc);
    }
    Ok(KestenAudit {
        mu_hat,
        partial_sums,
    })
}

/// Checks `B(z)(1 - I(z)) = 1` coefficientwise up to `z^degree`, where `B`
/// and `I` are the bridge and irreducible-bridge generating functions.
pub fn series_identity_check(table: &CountsTable, degree: usize) -> Result<bool> {
    if degree > table.max_n {
        return Err(Error::Precondition(format!(
            "degree {degree} exceeds table length {}",
            table.max_n
        )));
    }
    // 1 - I(z), with I having no constant term
    let mut one_minus_i: Vec<BigInt> = vec![BigInt::one()];
    one_minus_i.extend((1..=degree).map(|k| -BigInt::from(table.irreducible(k))));
    let b: Vec<BigInt> = table.b[..=degree].iter().cloned().map(BigInt::from).collect();
    for k in 0..=degree {
        let coeff: BigInt = (0..=k).map(|j| &b[j] * &one_minus_i[k - j]).sum();
        let expected = if k == 0 { BigInt::one() } else { BigInt::zero() };
        if coeff != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Connective-constant estimates at one length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectiveEstimate {
    pub n: usize,
    /// `c_n^{1/n}`, an upper bound on the connective constant.
    pub upper_bound: f64,
    /// `c_{n+1} / c_n`, absent at the last row.
    pub ratio: Option<f64>,
}

pub fn connective_estimates(table: &CountsTable) -> Result<Vec<ConnectiveEstimate>> {
    if table.max_n < 2 {
        return Err(Error::Precondition("connective estimates need max_n ≥ 2".into()));
    }
    let f = |x: &BigUint| x.to_f64().unwrap_or(f64::INFINITY);
    Ok((1..=table.max_n)
        .map(|n| ConnectiveEstimate {
            n,
            upper_bound: f(&table.c[n]).powf(1.0 / n as f64),
            ratio: (n < table.max_n).then(|| f(&table.c[n + 1]) / f(&table.c[n])),
        })
        .collect())
}
