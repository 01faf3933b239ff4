//! Remainders of `T^j` and of `f_a` modulo `(T - X_1)...(T - X_r)`, expressed
//! as polynomials in the elementary symmetric functions `Π_1, ..., Π_r`.
//!
//! `H_{i,j}` is the coefficient of `T^i` in the remainder of `T^j`. The base
//! row is `T^r ≡ Π_1 T^{r-1} - Π_2 T^{r-2} + ... + (-1)^{r-1} Π_r` and each
//! further row follows from multiplying by `T` once more:
//!
//! ```text
//! H_{k,j+1} = (-1)^{r-1-k} Π_{r-k} H_{r-1,j} + H_{k-1,j}    (k >= 1)
//! H_{0,j+1} = (-1)^{r-1}   Π_r     H_{r-1,j}
//! ```
//!
//! The recurrence has integer coefficients, so one [`Integers`] table serves
//! every characteristic after [`HTable::reduce`].

mod poly;

pub use poly::{
    elem_sym_raw, weighted_degree, CoeffRing, CompiledSym, Integers, Monomial, PowerTable, SymPoly,
};

use crate::error::{Error, Result};
use crate::exact::FamilySpec;
use crate::gf::FieldCtx;
use crate::regime::validate_regime;

/// `H_{i,j}` for `0 <= i < r` and `r <= j <= d`.
#[derive(Debug, Clone)]
pub struct HTable<R: CoeffRing> {
    r: usize,
    d: usize,
    // rows[j - r][i]
    rows: Vec<Vec<SymPoly<R>>>,
}

fn sign<R: CoeffRing>(ring: &R, exponent: usize) -> R::Elem {
    ring.from_int(if exponent % 2 == 0 { 1 } else { -1 })
}

/// Builds the table over any coefficient ring.
pub fn build_h_in<R: CoeffRing>(ring: &R, r: usize, d: usize) -> Result<HTable<R>> {
    if r == 0 || r > d {
        return Err(Error::OutOfRange {
            what: "r",
            value: r as i64,
            range: format!("[1, {d}]"),
        });
    }
    let base: Vec<SymPoly<R>> = (0..r)
        .map(|i| SymPoly::pi(ring, r, (r - i) as u32, sign(ring, r - 1 - i)))
        .collect();
    let mut rows = vec![base.clone()];
    for _ in r..d {
        let prev = rows.last().expect("at least one row");
        let top = &prev[r - 1];
        let next: Vec<SymPoly<R>> = (0..r)
            .map(|k| {
                let shifted = base[k].mul(top);
                if k == 0 {
                    shifted
                } else {
                    shifted.add(&prev[k - 1])
                }
            })
            .collect();
        rows.push(next);
    }
    Ok(HTable { r, d, rows })
}

/// Characteristic-free table with integer coefficients.
pub fn build_h_integer(r: usize, d: usize) -> Result<HTable<Integers>> {
    build_h_in(&Integers, r, d)
}

/// Table with coefficients reduced into `field`.
pub fn build_h(field: &FieldCtx, r: usize, d: usize) -> Result<HTable<FieldCtx>> {
    Ok(build_h_integer(r, d)?.reduce(field))
}

impl<R: CoeffRing> HTable<R> {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `H_{i,j}`; panics outside `0 <= i < r <= j <= d`.
    pub fn get(&self, i: usize, j: usize) -> &SymPoly<R> {
        assert!(i < self.r && j >= self.r && j <= self.d, "H[{i}][{j}] outside table");
        &self.rows[j - self.r][i]
    }

    /// Entries as `(i, j, H_{i,j})`, by `j` then `i`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &SymPoly<R>)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(move |(dj, row)| row.iter().enumerate().map(move |(i, h)| (i, self.r + dj, h)))
    }

    /// Text dump, one `H[i][j] = ...` line per entry.
    pub fn render(&self) -> String {
        self.entries()
            .map(|(i, j, h)| format!("H[{i}][{j}] = {h}\n"))
            .collect()
    }
}

impl HTable<Integers> {
    pub fn reduce(&self, field: &FieldCtx) -> HTable<FieldCtx> {
        HTable {
            r: self.r,
            d: self.d,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|h| h.reduce(field)).collect())
                .collect(),
        }
    }
}

/// The system `R_j` for `d - s <= j <= r - 1`.
#[derive(Debug, Clone)]
pub struct RSystem {
    pub r: usize,
    /// `(j, R_j)` in ascending `j`.
    pub equations: Vec<(usize, SymPoly<FieldCtx>)>,
    /// Whether `2(s + 1) <= d`, the range in which each `R_j` is monic in
    /// `Π_{d-j}`.
    pub symbolic_regime: bool,
}

impl RSystem {
    /// Values of every `R_j` at given `Π_1..Π_r`.
    pub fn eval_at_pis(&self, pis: &[u32]) -> Vec<u32> {
        self.equations.iter().map(|(_, p)| p.eval_at_pis(pis)).collect()
    }

    pub fn render(&self) -> String {
        self.equations
            .iter()
            .map(|(j, p)| format!("R[{j}] = {p}\n"))
            .collect()
    }
}

/// Assembles `R_j = c_j + sum_{i=r}^{deg} c_i H_{j,i}` for `j` in `js`, where
/// `coeffs` is the full ascending coefficient vector of the polynomial being
/// reduced.
pub fn assemble_from_coeffs(
    table: &HTable<FieldCtx>,
    coeffs: &[u32],
    js: std::ops::Range<usize>,
) -> Result<Vec<(usize, SymPoly<FieldCtx>)>> {
    let r = table.r();
    let deg = coeffs.len().saturating_sub(1);
    if deg > table.d() {
        return Err(Error::OutOfRange {
            what: "degree",
            value: deg as i64,
            range: format!("[0, {}]", table.d()),
        });
    }
    if js.end > r {
        return Err(Error::OutOfRange {
            what: "j",
            value: js.end as i64 - 1,
            range: format!("[0, {}]", r - 1),
        });
    }
    let field = table.get(0, r).ring().clone();
    Ok(js
        .map(|j| {
            let mut acc = SymPoly::constant(&field, r, coeffs.get(j).copied().unwrap_or(0));
            for (i, &c) in coeffs.iter().enumerate().skip(r) {
                if c != 0 {
                    acc = acc.add(&table.get(j, i).scale(&c));
                }
            }
            (j, acc)
        })
        .collect())
}

/// `R_j^a` for `d - s <= j <= r - 1`, with the family conventions `a_d = 1`
/// and `a_j = 0` for `j < d - s`. Valid for every family; outside
/// `2(s + 1) <= d` the equations still describe the remainder but need not be
/// monic in `Π_{d-j}`.
pub fn assemble_r(spec: &FamilySpec, r: usize) -> Result<RSystem> {
    let table = build_h(spec.field(), r.max(1), spec.d())?;
    assemble_r_with(spec, r, &table)
}

/// [`assemble_r`] reusing a prebuilt table with `table.r() = r` and
/// `table.d() >= d`.
pub fn assemble_r_with(spec: &FamilySpec, r: usize, table: &HTable<FieldCtx>) -> Result<RSystem> {
    let (m, d) = (spec.m(), spec.d());
    if r < m + 1 || r > d {
        return Err(Error::OutOfRange {
            what: "r",
            value: r as i64,
            range: format!("[{}, {d}]", m + 1),
        });
    }
    if table.r() != r || table.d() < d {
        return Err(Error::Dimension {
            expected: r,
            got: table.r(),
        });
    }
    let equations = assemble_from_coeffs(table, &spec.fa_coeffs(), m..r)?;
    Ok(RSystem {
        r,
        equations,
        symbolic_regime: validate_regime(spec.field().q() as u64, d as u64, spec.s() as u64, None).symbolic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int_poly(terms: &[(&[(u32, u32)], i64)], r: usize) -> SymPoly<Integers> {
        SymPoly::from_terms(
            &Integers,
            r,
            terms.iter().map(|(m, c)| (m.to_vec(), BigInt::from(*c))),
        )
    }

    #[test]
    fn base_rows() {
        let t = build_h_integer(3, 4).unwrap();
        assert_eq!(*t.get(2, 3), int_poly(&[(&[(1, 1)], 1)], 3));
        assert_eq!(*t.get(1, 3), int_poly(&[(&[(2, 1)], -1)], 3));
        assert_eq!(*t.get(0, 3), int_poly(&[(&[(3, 1)], 1)], 3));
        let t4 = build_h_integer(4, 4).unwrap();
        assert_eq!(*t4.get(3, 4), int_poly(&[(&[(1, 1)], 1)], 4));
        assert_eq!(*t4.get(2, 4), int_poly(&[(&[(2, 1)], -1)], 4));
        assert_eq!(*t4.get(1, 4), int_poly(&[(&[(3, 1)], 1)], 4));
        assert_eq!(*t4.get(0, 4), int_poly(&[(&[(4, 1)], -1)], 4));
    }

    #[test]
    fn second_row_r3() {
        let t = build_h_integer(3, 4).unwrap();
        assert_eq!(*t.get(2, 4), int_poly(&[(&[(1, 2)], 1), (&[(2, 1)], -1)], 3));
        assert_eq!(*t.get(1, 4), int_poly(&[(&[(1, 1), (2, 1)], -1), (&[(3, 1)], 1)], 3));
        assert_eq!(*t.get(0, 4), int_poly(&[(&[(1, 1), (3, 1)], 1)], 3));
    }

    #[test]
    fn assemble_examples() {
        let f7 = FieldCtx::prime(7).unwrap();
        let spec = FamilySpec::new(&f7, 3, 1, vec![4]).unwrap();
        let sys = assemble_r(&spec, 3).unwrap();
        assert_eq!(sys.equations.len(), 1);
        let (j, r2) = &sys.equations[0];
        assert_eq!(*j, 2);
        assert_eq!(r2.to_string(), "4 + 1·Π1");
        assert!(!sys.symbolic_regime);

        let spec = FamilySpec::new(&f7, 4, 2, vec![3, 5]).unwrap();
        let sys = assemble_r(&spec, 4).unwrap();
        let rendered: Vec<String> = sys.equations.iter().map(|(j, p)| format!("{j}: {p}")).collect();
        assert_eq!(rendered, vec!["2: 5 + 6·Π2", "3: 3 + 1·Π1"]);

        let spec = FamilySpec::new(&f7, 4, 1, vec![3]).unwrap();
        let sys = assemble_r(&spec, 4).unwrap();
        assert_eq!(sys.equations[0].1.to_string(), "3 + 1·Π1");
        assert!(assemble_r(&spec, 3).is_err());
        assert!(assemble_r(&spec, 5).is_err());
    }

    #[test]
    fn sym_eval_examples() {
        let f7 = FieldCtx::prime(7).unwrap();
        let x: Vec<_> = [1, 2, 3].iter().map(|&v| f7.element(v).unwrap()).collect();
        let p1 = SymPoly::pi(&f7, 3, 1, 1);
        let p2 = SymPoly::pi(&f7, 3, 2, 1);
        assert_eq!(p1.sym_eval(&x).unwrap().value(), 6);
        assert_eq!(p2.sym_eval(&x).unwrap().value(), 4);
        assert_eq!(p1.mul(&p1).sub(&p2).sym_eval(&x).unwrap().value(), 4);
        assert!(p1.sym_eval(&x[..2]).is_err());
    }

    #[test]
    fn partial_examples() {
        let f7 = FieldCtx::prime(7).unwrap();
        let p1 = SymPoly::pi(&f7, 3, 1, 1);
        let p2 = SymPoly::pi(&f7, 3, 2, 1);
        let p3 = SymPoly::pi(&f7, 3, 3, 1);
        let h = p1.mul(&p1).sub(&p2);
        assert_eq!(h.partial(1).unwrap(), p1.scale(&2));
        let f2 = FieldCtx::prime(2).unwrap();
        let q1 = SymPoly::pi(&f2, 3, 1, 1);
        let h2 = q1.mul(&q1).sub(&SymPoly::pi(&f2, 3, 2, 1));
        assert!(h2.partial(1).unwrap().is_zero());
        assert_eq!(p1.mul(&p3).partial(3).unwrap(), p1);
        let r = SymPoly::constant(&f7, 3, 4).add(&p1);
        assert_eq!(r.partial(1).unwrap(), SymPoly::constant(&f7, 3, 1));
        assert!(r.partial(4).is_err());
    }

    #[test]
    fn table_structure() {
        for r in 1..=6 {
            let t = build_h_integer(r, 10).unwrap();
            for (i, j, h) in t.entries() {
                assert_eq!(h.homogeneous_degree(), Some((j - i) as u32), "H[{i}][{j}] r={r}");
                if j - i <= r {
                    let t_idx = (j - i) as u32;
                    assert_eq!(h.degree_in(t_idx), Some(1));
                    assert!(h.coefficient_of(t_idx, 1).unit_sign().is_some());
                }
            }
        }
    }

    #[test]
    fn remainder_consistency() {
        let f = FieldCtx::parse("3^2:1,0,1").unwrap();
        let spec = FamilySpec::new(&f, 7, 2, vec![5, 2]).unwrap();
        for r in 6..=7 {
            let sys = assemble_r(&spec, r).unwrap();
            let x: Vec<u32> = (1..=r as u32).collect();
            let rem = spec.f_a().rem_by_roots(&x);
            for (j, p) in &sys.equations {
                assert_eq!(p.eval_raw(&x), rem.coeff(*j), "r={r} j={j}");
            }
        }
    }

    #[test]
    fn render_dump() {
        let t = build_h_integer(2, 3).unwrap();
        let dump = t.render();
        assert!(dump.contains("H[1][2] = 1·Π1"));
        assert!(dump.contains("H[0][2] = -1·Π2"));
        assert!(dump.contains("H[1][3] = 1·Π1^2 - 1·Π2"));
    }
}
