//! Direct evaluation of the two-term triangular recurrence and the named
//! families built on it.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::TriangleParams;
use crate::polyring::{int, BigRational};

/// Which recurrence produced a triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyTag {
    Gkp { params: TriangleParams },
    WhitneyEulerian { m: i64, r: i64 },
    REulerian { r: i64 },
    Stirling2,
    SecondOrderEulerian { r: i64 },
}

impl FamilyTag {
    pub fn gkp(params: TriangleParams) -> Self {
        FamilyTag::Gkp { params }
    }

    /// The six recurrence coefficients `(a0, a1, a2, b0, b1, b2)` of the family.
    pub fn params(&self) -> TriangleParams {
        match self {
            FamilyTag::Gkp { params } => params.clone(),
            FamilyTag::WhitneyEulerian { m, r } => {
                TriangleParams::from_ints([*r, *m, 0, m - r, -m, *m])
            }
            FamilyTag::REulerian { r } => TriangleParams::from_ints([*r, 1, 0, 1 - r, -1, 1]),
            FamilyTag::Stirling2 => TriangleParams::from_ints([0, 1, 0, 1, 0, 0]),
            FamilyTag::SecondOrderEulerian { r } => {
                TriangleParams::from_ints([1, 1, 0, 1 - r, -1, *r])
            }
        }
    }

    /// First row produced by the recurrence; earlier rows are boundary data.
    pub fn recurrence_start(&self) -> usize {
        match self {
            FamilyTag::REulerian { r } if *r > 1 => *r as usize + 1,
            _ => 1,
        }
    }

    pub fn name(&self) -> String {
        match self {
            FamilyTag::Gkp { params } => format!("gkp({params})"),
            FamilyTag::WhitneyEulerian { m, r } => format!("whitney(m={m},r={r})"),
            FamilyTag::REulerian { r } => format!("r-eulerian(r={r})"),
            FamilyTag::Stirling2 => "stirling2".into(),
            FamilyTag::SecondOrderEulerian { r } => format!("second-order(r={r})"),
        }
    }

    /// Builds the triangle of this family up to row `n_max`.
    pub fn build(&self, n_max: usize) -> Result<Triangle> {
        match self {
            FamilyTag::Gkp { params } => Ok(recurrence_triangle(params, n_max)),
            FamilyTag::WhitneyEulerian { m, r } => whitney_eulerian(*m, *r, n_max),
            FamilyTag::REulerian { r } => r_eulerian(*r, n_max),
            FamilyTag::Stirling2 => Ok(stirling2_triangle(n_max)),
            FamilyTag::SecondOrderEulerian { r } => second_order_eulerian(*r, n_max),
        }
    }
}

/// Rows `T(n, 0..=n)` for `n = 0..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    family: FamilyTag,
    rows: Vec<Vec<BigRational>>,
}

impl Triangle {
    /// # Panics
    ///
    /// Panics unless `rows[n]` has length `n + 1` for every `n`.
    pub fn from_rows(family: FamilyTag, rows: Vec<Vec<BigRational>>) -> Self {
        assert!(
            rows.iter().enumerate().all(|(n, r)| r.len() == n + 1),
            "row n must have n+1 entries"
        );
        Triangle { family, rows }
    }

    pub fn family(&self) -> &FamilyTag {
        &self.family
    }

    pub fn params(&self) -> TriangleParams {
        self.family.params()
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Result<&[BigRational]> {
        self.rows
            .get(n)
            .map(Vec::as_slice)
            .ok_or(Error::RowOutOfRange {
                requested: n,
                max: self.n_max(),
            })
    }

    /// `T(n,k)`, zero outside the stored range.
    pub fn get(&self, n: i64, k: i64) -> BigRational {
        if n < 0 || k < 0 || k > n {
            return BigRational::zero();
        }
        self.rows
            .get(n as usize)
            .map(|r| r[k as usize].clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn row_sum(&self, n: usize) -> Result<BigRational> {
        Ok(self.row(n)?.iter().sum())
    }

    pub fn alternating_row_sum(&self, n: usize) -> Result<BigRational> {
        Ok(self
            .row(n)?
            .iter()
            .enumerate()
            .map(|(k, x)| if k % 2 == 0 { x.clone() } else { -x.clone() })
            .sum())
    }

    /// Entries as integers, or the first `(n, k)` holding a proper fraction.
    pub fn assert_integral(&self) -> std::result::Result<Vec<Vec<BigInt>>, (usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .map(|(n, row)| {
                row.iter()
                    .enumerate()
                    .map(|(k, x)| x.is_integer().then(|| x.to_integer()).ok_or((n, k)))
                    .collect()
            })
            .collect()
    }

    /// First cell that its two parents do not reproduce, if any.
    pub fn first_inconsistency(&self) -> Option<(usize, usize)> {
        let p = self.params();
        for n in self.family.recurrence_start()..self.rows.len() {
            for k in 0..=n {
                let expect = p.a_coeff(n, k) * self.get(n as i64 - 1, k as i64)
                    + p.b_coeff(n, k) * self.get(n as i64 - 1, k as i64 - 1);
                if expect != self.rows[n][k] {
                    return Some((n, k));
                }
            }
        }
        None
    }
}

fn fill_from(p: &TriangleParams, mut rows: Vec<Vec<BigRational>>, n_max: usize) -> Vec<Vec<BigRational>> {
    let zero = BigRational::zero();
    for n in rows.len()..=n_max {
        let prev = &rows[n - 1];
        let row: Vec<BigRational> = (0..=n)
            .map(|k| {
                let stay = prev.get(k).unwrap_or(&zero);
                let step = if k > 0 { &prev[k - 1] } else { &zero };
                let mut x = BigRational::zero();
                if !stay.is_zero() {
                    x += p.a_coeff(n, k) * stay;
                }
                if !step.is_zero() {
                    x += p.b_coeff(n, k) * step;
                }
                x
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// `T(0,0) = 1` and the recurrence for every later row.
pub fn recurrence_triangle(p: &TriangleParams, n_max: usize) -> Triangle {
    let rows = fill_from(p, vec![vec![BigRational::one()]], n_max);
    Triangle::from_rows(FamilyTag::gkp(p.clone()), rows)
}

/// `A_{m,r}(n,k) = (mk+r) A(n-1,k) + (mn-mk+m-r) A(n-1,k-1)`.
pub fn whitney_eulerian(m: i64, r: i64, n_max: usize) -> Result<Triangle> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("whitney needs m >= 1, got {m}")));
    }
    let family = FamilyTag::WhitneyEulerian { m, r };
    let rows = fill_from(&family.params(), vec![vec![BigRational::one()]], n_max);
    Ok(Triangle::from_rows(family, rows))
}

/// Permutations of `[n]` by number of `r`-excedances (`sigma(j) >= j + r`).
///
/// The recurrence `A_r(n,k) = (k+r) A_r(n-1,k) + (n-k+1-r) A_r(n-1,k-1)` is
/// only valid from row `r+1` on; rows `n <= r` are `[n!, 0, ..., 0]`, since
/// no index of a permutation of `[n]` can be an `r`-excedance there.
pub fn r_eulerian(r: i64, n_max: usize) -> Result<Triangle> {
    if r < 0 {
        return Err(Error::InvalidArgument(format!("r-eulerian needs r >= 0, got {r}")));
    }
    let family = FamilyTag::REulerian { r };
    let boundary = (family.recurrence_start() - 1).min(n_max);
    let mut fact = BigRational::one();
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=boundary {
        if n > 0 {
            fact *= int(n as i64);
        }
        let mut row = vec![BigRational::zero(); n + 1];
        row[0] = fact.clone();
        rows.push(row);
    }
    let rows = fill_from(&family.params(), rows, n_max);
    Ok(Triangle::from_rows(family, rows))
}

/// `B(n,k) = (rn-k+1-r) B(n-1,k-1) + (k+1) B(n-1,k)` with `B(0,0) = 1`.
pub fn second_order_eulerian(r: i64, n_max: usize) -> Result<Triangle> {
    if r < 1 {
        return Err(Error::InvalidArgument(format!("second-order needs r >= 1, got {r}")));
    }
    let family = FamilyTag::SecondOrderEulerian { r };
    let rows = fill_from(&family.params(), vec![vec![BigRational::one()]], n_max);
    Ok(Triangle::from_rows(family, rows))
}

/// Stirling numbers of the second kind, `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
pub fn stirling2_triangle(n_max: usize) -> Triangle {
    let family = FamilyTag::Stirling2;
    let rows = fill_from(&family.params(), vec![vec![BigRational::one()]], n_max);
    Triangle::from_rows(family, rows)
}
