use rayon::prelude::*;
use serde::Serialize;

use super::algebra::{unit_vector, FiniteAlgebra, ModuleData};
use super::fp::{self, FpSpace};
use crate::arith::{mul_mod, sub_mod};
use crate::error::{Error, Result};

/// Default bound on `p^dim I` for the per-element pass.
pub const DEFAULT_H_BUDGET: u64 = 1_000_000;

/// A homomorphism `I -> M` given by its values on the echelon basis of `I`.
pub type HomValues = Vec<Vec<u64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomValue {
    pub t: String,
    pub value: String,
    pub t_vector: Vec<u64>,
    pub value_vector: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HModuleReport {
    pub p: u64,
    pub dim_r: usize,
    pub dim_i: usize,
    pub dim_m: usize,
    pub dim_hom: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
    /// Number of elements `t` of `I` whose condition was imposed (one per
    /// line through the origin).
    pub elements_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representative: Option<Vec<HomValue>>,
    /// The representative passed [`verify_nonprincipal`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representative_verified: Option<bool>,
}

/// `Hom_R(I, M)`, `Z_R(I, M)` and `B_R(I, M)` as subspaces of the maps
/// `I -> M`, flattened as `value on t_0 || value on t_1 || ...`.
#[derive(Clone, Debug)]
pub struct HSpaces {
    pub hom: Vec<Vec<u64>>,
    pub z: Vec<Vec<u64>>,
    pub b: Vec<Vec<u64>>,
    pub elements_checked: u64,
}

fn flat_len(alg: &FiniteAlgebra) -> usize {
    alg.ideal().len() * alg.module_dim()
}

fn unflatten(alg: &FiniteAlgebra, v: &[u64]) -> HomValues {
    v.chunks(alg.module_dim()).map(<[u64]>::to_vec).collect()
}

/// `phi(t)` for `t = sum_k lambda_k t_k`.
fn evaluate(p: u64, phi: &[Vec<u64>], lambda: &[u64], dm: usize) -> Vec<u64> {
    let mut out = vec![0; dm];
    for (v, &c) in phi.iter().zip(lambda) {
        fp::axpy(p, &mut out, c, v);
    }
    out
}

fn element(alg: &FiniteAlgebra, lambda: &[u64]) -> Vec<u64> {
    let mut t = vec![0; alg.dim()];
    for (basis_t, &c) in alg.ideal().iter().zip(lambda) {
        fp::axpy(alg.p(), &mut t, c, basis_t);
    }
    t
}

/// Digits of `index` in base `p`, least significant first.
fn digits(mut index: u64, p: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = index % p;
            index /= p;
            d
        })
        .collect()
}

fn hom_constraints(alg: &FiniteAlgebra) -> Vec<Vec<u64>> {
    let (p, d, dm) = (alg.p(), alg.dim(), alg.module_dim());
    let ideal = FpSpace::span(p, d, alg.ideal());
    let n = flat_len(alg);
    let mut rows = Vec::new();
    for i in 0..d {
        let e = unit_vector(d, i);
        let act = alg.action(&e);
        for (k, t) in alg.ideal().iter().enumerate() {
            let c = ideal.coordinates(&alg.multiply(&e, t)).expect("validated ideal");
            // sum_j c_j phi(t_j) - e_i phi(t_k) = 0, one row per coordinate of M.
            for r in 0..dm {
                let mut row = vec![0; n];
                for (j, &cj) in c.iter().enumerate() {
                    row[j * dm + r] = cj;
                }
                for s in 0..dm {
                    let idx = k * dm + s;
                    row[idx] = sub_mod(row[idx], act[r][s], p);
                }
                rows.push(row);
            }
        }
    }
    rows
}

/// Conditions `phi(t) in tM` for the elements `t` with indices in `range`,
/// as linear functionals on the coordinates over `hom`.
fn z_constraints(alg: &FiniteAlgebra, hom: &[Vec<u64>], range: std::ops::Range<u64>) -> FpSpace {
    let (p, dm, a) = (alg.p(), alg.module_dim(), alg.ideal().len());
    let values: Vec<HomValues> = hom.iter().map(|h| unflatten(alg, h)).collect();
    let mut space = FpSpace::new(p, hom.len());
    for index in range {
        if space.is_full() {
            break;
        }
        let lambda = digits(index, p, a);
        // One representative per line: first nonzero coordinate equal to 1.
        if lambda.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let act = alg.action(&element(alg, &lambda));
        // y with y^T (tM) = 0 cut out tM.
        for y in fp::nullspace(p, &fp::transpose(&act, dm), dm) {
            let row: Vec<u64> = values
                .iter()
                .map(|phi| {
                    evaluate(p, phi, &lambda, dm)
                        .iter()
                        .zip(&y)
                        .fold(0, |acc, (u, v)| crate::arith::add_mod(acc, mul_mod(*u, *v, p), p))
                })
                .collect();
            space.insert(&row);
        }
    }
    space
}

/// Compute `Hom`, `Z` and `B`, imposing `phi(t) in tM` for one `t` on every
/// line of `I` (the condition is invariant under scaling `t`).
pub fn h_spaces(alg: &FiniteAlgebra, budget: u64) -> Result<HSpaces> {
    let (p, dm, a) = (alg.p(), alg.module_dim(), alg.ideal().len());
    let n = flat_len(alg);
    let total = p
        .checked_pow(a as u32)
        .filter(|&t| t <= budget)
        .ok_or_else(|| Error::BudgetExceeded(format!("{p}^{a} elements of the ideal")))?;
    let hom = fp::nullspace(p, &hom_constraints(alg), n);
    let chunk = (total / 64).max(256);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    let pieces: Vec<FpSpace> = starts
        .par_iter()
        .map(|&s| z_constraints(alg, &hom, s..(s + chunk).min(total)))
        .collect();
    let mut constraints = FpSpace::new(p, hom.len());
    for piece in &pieces {
        for row in piece.basis() {
            constraints.insert(row);
        }
    }
    let z: Vec<Vec<u64>> = fp::nullspace(p, constraints.basis(), hom.len())
        .iter()
        .map(|mu| {
            let mut v = vec![0; n];
            for (h, &c) in hom.iter().zip(mu) {
                fp::axpy(p, &mut v, c, h);
            }
            v
        })
        .collect();
    let z = FpSpace::span(p, n, &z).basis().to_vec();
    let actions: Vec<Vec<Vec<u64>>> = alg.ideal().iter().map(|t| alg.action(t)).collect();
    let b: Vec<Vec<u64>> = (0..dm)
        .map(|j| {
            let m = unit_vector(dm, j);
            actions.iter().flat_map(|act| fp::mat_vec(p, act, &m)).collect()
        })
        .collect();
    let b = FpSpace::span(p, n, &b).basis().to_vec();
    let lines = (total - 1) / (p - 1);
    Ok(HSpaces {
        hom,
        z,
        b,
        elements_checked: lines,
    })
}

/// Whether `phi` is `R`-linear, satisfies `phi(t) in tM` for every `t` in
/// `I` (all `p^dim I` elements, no scaling shortcut), and is not of the
/// form `t -> t m`.
pub fn verify_nonprincipal(alg: &FiniteAlgebra, phi: &[Vec<u64>], budget: u64) -> Result<bool> {
    let (p, d, dm, a) = (alg.p(), alg.dim(), alg.module_dim(), alg.ideal().len());
    if phi.len() != a || phi.iter().any(|v| v.len() != dm) {
        return Err(Error::DimensionMismatch(format!("expected {a} values in a module of dimension {dm}")));
    }
    let total = p
        .checked_pow(a as u32)
        .filter(|&t| t <= budget)
        .ok_or_else(|| Error::BudgetExceeded(format!("{p}^{a} elements of the ideal")))?;
    let ideal = FpSpace::span(p, d, alg.ideal());
    for i in 0..d {
        let e = unit_vector(d, i);
        for (k, t) in alg.ideal().iter().enumerate() {
            let c = ideal.coordinates(&alg.multiply(&e, t)).expect("validated ideal");
            if evaluate(p, phi, &c, dm) != fp::mat_vec(p, &alg.action(&e), &phi[k]) {
                return Ok(false);
            }
        }
    }
    let in_tm = (0..total).into_par_iter().all(|index| {
        let lambda = digits(index, p, a);
        let act = alg.action(&element(alg, &lambda));
        let cols = fp::transpose(&act, dm);
        fp::solve(p, &cols, &evaluate(p, phi, &lambda, dm)).is_some()
    });
    if !in_tm {
        return Ok(false);
    }
    // t_k m = phi(t_k) for all k, stacked.
    let actions: Vec<Vec<Vec<u64>>> = alg.ideal().iter().map(|t| alg.action(t)).collect();
    let cols: Vec<Vec<u64>> = (0..dm)
        .map(|j| actions.iter().flat_map(|act| act.iter().map(move |row| row[j])).collect())
        .collect();
    let target: Vec<u64> = phi.concat();
    Ok(fp::solve(p, &cols, &target).is_none())
}

/// Canonical representative of a nonzero class in `Z / B`. Reduction modulo
/// `B` eliminates the latest coordinates first, so values concentrate on the
/// earliest basis elements of `I`; among the reduced quotient basis the
/// vector of smallest support wins, ties going to the earliest first entry.
fn representative(p: u64, n: usize, z: &[Vec<u64>], b: &[Vec<u64>]) -> Option<Vec<u64>> {
    let rev = |v: &Vec<u64>| v.iter().rev().copied().collect::<Vec<u64>>();
    let bspace = FpSpace::span(p, n, &b.iter().map(rev).collect::<Vec<_>>());
    let reduced: Vec<Vec<u64>> = z
        .iter()
        .map(|v| bspace.reduce(&rev(v)))
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let quotient = FpSpace::span(p, n, &reduced);
    quotient
        .basis()
        .iter()
        .map(rev)
        .min_by_key(|v| (v.iter().filter(|&&x| x != 0).count(), v.iter().position(|&x| x != 0)))
}

/// Dimensions of `Hom`, `Z`, `B` and `H = Z / B`, with a verified
/// nonprincipal representative when `H` is nonzero.
pub fn compute_h(alg: &FiniteAlgebra, budget: u64) -> Result<HModuleReport> {
    let spaces = h_spaces(alg, budget)?;
    let (p, n) = (alg.p(), flat_len(alg));
    let zspace = FpSpace::span(p, n, &spaces.z);
    if spaces.b.iter().any(|v| !zspace.contains(v)) {
        return Err(Error::InconsistentData("a principal homomorphism fails the Z condition".into()));
    }
    let rep = representative(p, n, &spaces.z, &spaces.b).map(|v| unflatten(alg, &v));
    let verified = match &rep {
        Some(phi) => Some(verify_nonprincipal(alg, phi, budget)?),
        None => None,
    };
    Ok(HModuleReport {
        p,
        dim_r: alg.dim(),
        dim_i: alg.ideal().len(),
        dim_m: alg.module_dim(),
        dim_hom: spaces.hom.len(),
        dim_z: spaces.z.len(),
        dim_b: spaces.b.len(),
        dim_h: spaces.z.len() - spaces.b.len(),
        elements_checked: spaces.elements_checked,
        representative: rep.map(|phi| {
            alg.ideal()
                .iter()
                .zip(phi)
                .map(|(t, v)| HomValue {
                    t: alg.render(t),
                    value: alg.render_module(&v),
                    t_vector: t.clone(),
                    value_vector: v,
                })
                .collect()
        }),
        representative_verified: verified,
    })
}

/// Dimensions `(Hom, Z, B)` by enumerating every linear map `I -> M` and
/// every module element. Only for tiny instances.
pub fn brute_force_dims(alg: &FiniteAlgebra, budget: u64) -> Result<(usize, usize, usize)> {
    let (p, d, dm, a) = (alg.p(), alg.dim(), alg.module_dim(), alg.ideal().len());
    let n = a * dm;
    let maps = p
        .checked_pow(n as u32)
        .filter(|&m| m <= budget)
        .ok_or_else(|| Error::BudgetExceeded(format!("{p}^{n} maps")))?;
    let ideal = FpSpace::span(p, d, alg.ideal());
    let elements: Vec<Vec<u64>> = (0..p.pow(a as u32)).map(|i| digits(i, p, a)).collect();
    let images: Vec<Vec<Vec<u64>>> = elements
        .iter()
        .map(|lambda| {
            let act = alg.action(&element(alg, lambda));
            // All of tM, as a list of vectors.
            (0..p.pow(dm as u32)).map(|m| fp::mat_vec(p, &act, &digits(m, p, dm))).collect()
        })
        .collect();
    let mut linear = 0u64;
    let mut in_z = 0u64;
    for code in 0..maps {
        let phi = unflatten(alg, &digits(code, p, n));
        let is_linear = (0..d).all(|i| {
            let e = unit_vector(d, i);
            alg.ideal().iter().enumerate().all(|(k, t)| {
                let c = ideal.coordinates(&alg.multiply(&e, t)).unwrap();
                evaluate(p, &phi, &c, dm) == fp::mat_vec(p, &alg.action(&e), &phi[k])
            })
        });
        if !is_linear {
            continue;
        }
        linear += 1;
        if elements
            .iter()
            .zip(&images)
            .all(|(lambda, tm)| tm.contains(&evaluate(p, &phi, lambda, dm)))
        {
            in_z += 1;
        }
    }
    let principal: std::collections::HashSet<Vec<u64>> = (0..p.pow(dm as u32))
        .map(|m| {
            let m = digits(m, p, dm);
            alg.ideal().iter().flat_map(|t| fp::mat_vec(p, &alg.action(t), &m)).collect()
        })
        .collect();
    let log = |mut x: u64| {
        let mut k = 0;
        while x > 1 {
            x /= p;
            k += 1;
        }
        k
    };
    Ok((log(linear), log(in_z), log(principal.len() as u64)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorialityReport {
    /// `f . Z(I, M)` lies in `Z(I, N)`.
    pub z_maps_to_z: bool,
    /// `f . B(I, M)` lies in `B(I, N)`.
    pub b_maps_to_b: bool,
    pub dim_h_source: usize,
    pub dim_h_target: usize,
    /// Rank of the induced map `H(I, M) -> H(I, N)`.
    pub induced_rank: usize,
}

/// Check that an `R`-linear `f: M -> N` (a `dim N x dim M` matrix) induces a
/// map `H(I, M) -> H(I, N)` by composition.
pub fn h_functoriality_check(
    alg: &FiniteAlgebra,
    target: Option<ModuleData>,
    f: &[Vec<u64>],
    budget: u64,
) -> Result<FunctorialityReport> {
    let p = alg.p();
    let other = alg.with_module(target)?;
    let (dm, dn, d) = (alg.module_dim(), other.module_dim(), alg.dim());
    if f.len() != dn || f.iter().any(|r| r.len() != dm) {
        return Err(Error::DimensionMismatch(format!("f must be {dn}x{dm}")));
    }
    for i in 0..d {
        let e = unit_vector(d, i);
        let lhs = super::algebra::matmul(p, f, &alg.action(&e));
        let rhs = super::algebra::matmul(p, &other.action(&e), f);
        if lhs != rhs {
            return Err(Error::InconsistentData(format!("f does not commute with {}", alg.basis()[i])));
        }
    }
    let source = h_spaces(alg, budget)?;
    let dest = h_spaces(&other, budget)?;
    let compose = |v: &Vec<u64>| -> Vec<u64> { unflatten(alg, v).iter().flat_map(|x| fp::mat_vec(p, f, x)).collect() };
    let n = flat_len(&other);
    let zn = FpSpace::span(p, n, &dest.z);
    let bn = FpSpace::span(p, n, &dest.b);
    let fz: Vec<Vec<u64>> = source.z.iter().map(compose).collect();
    let z_maps_to_z = fz.iter().all(|v| zn.contains(v));
    let b_maps_to_b = source.b.iter().map(compose).all(|v| bn.contains(&v));
    let mut image = bn.clone();
    for v in &fz {
        image.insert(v);
    }
    Ok(FunctorialityReport {
        z_maps_to_z,
        b_maps_to_b,
        dim_h_source: source.z.len() - source.b.len(),
        dim_h_target: dest.z.len() - dest.b.len(),
        induced_rank: image.rank() - bn.rank(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseChangeReport {
    pub dim_annihilator: usize,
    pub dim_h: usize,
    pub dim_h_quotient: usize,
    pub equal: bool,
}

/// `R / J` for `J = ann(M)`, with the image of `I` and the induced action.
pub fn annihilator_quotient(alg: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let (p, d, dm) = (alg.p(), alg.dim(), alg.module_dim());
    // r -> action(r), flattened, one column per basis element.
    let cols: Vec<Vec<u64>> = (0..d).map(|i| alg.action(&unit_vector(d, i)).concat()).collect();
    let rows = fp::transpose(&cols, dm * dm);
    let j = FpSpace::span(p, d, &fp::nullspace(p, &rows, d));
    let keep: Vec<usize> = (0..d).filter(|c| !j.pivots().contains(c)).collect();
    let coords = |v: &[u64]| -> Vec<u64> {
        let r = j.reduce(v);
        keep.iter().map(|&c| r[c]).collect()
    };
    let mul = keep
        .iter()
        .map(|&a| keep.iter().map(|&b| coords(&alg.multiply(&unit_vector(d, a), &unit_vector(d, b)))).collect())
        .collect();
    let ideal = alg.ideal().iter().map(|t| coords(t)).collect();
    let module = ModuleData {
        basis: alg.module_basis().to_vec(),
        action: keep.iter().map(|&a| alg.action(&unit_vector(d, a))).collect(),
    };
    let labels = keep.iter().map(|&a| alg.basis()[a].clone()).collect();
    FiniteAlgebra::new(p, labels, mul, ideal, Some(module))
}

/// Compare `H_R(I, M)` with `H_{R/J}((I + J)/J, M)` for `J = ann(M)`.
pub fn annihilator_base_change(alg: &FiniteAlgebra, budget: u64) -> Result<BaseChangeReport> {
    let q = annihilator_quotient(alg)?;
    let before = compute_h(alg, budget)?;
    let after = compute_h(&q, budget)?;
    Ok(BaseChangeReport {
        dim_annihilator: alg.dim() - q.dim(),
        dim_h: before.dim_h,
        dim_h_quotient: after.dim_h,
        equal: before.dim_h == after.dim_h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_has_nonprincipal_class() {
        for p in [2, 3] {
            let alg = FiniteAlgebra::nonprincipal_h(p).unwrap();
            let r = compute_h(&alg, DEFAULT_H_BUDGET).unwrap();
            assert!(r.dim_h >= 1, "{r:?}");
            assert_eq!(r.representative_verified, Some(true));
            // x -> xz, zero on the other basis elements of I.
            let mut phi = vec![vec![0; 10]; 7];
            phi[0][8] = 1;
            assert!(verify_nonprincipal(&alg, &phi, DEFAULT_H_BUDGET).unwrap());
            let rep = r.representative.unwrap();
            assert_eq!((rep[0].t.as_str(), rep[0].value.as_str()), ("x", "xz"));
            assert!(rep[1..].iter().all(|v| v.value == "0"));
        }
    }

    #[test]
    fn zero_and_principal_ideals() {
        let alg = FiniteAlgebra::nonprincipal_h(2).unwrap().with_ideal(&[]).unwrap();
        let r = compute_h(&alg, DEFAULT_H_BUDGET).unwrap();
        assert_eq!((r.dim_z, r.dim_b, r.dim_h), (0, 0, 0));
        let alg = FiniteAlgebra::nonprincipal_h(2).unwrap().with_ideal(&[unit_vector(10, 1)]).unwrap();
        assert_eq!(compute_h(&alg, DEFAULT_H_BUDGET).unwrap().dim_h, 0);
    }

    #[test]
    fn brute_force_agrees_on_tiny_algebras() {
        // k[x, y] / (x, y)^2 with I = (x, y), and k[t]/(t^3) with I = (t).
        let labels = vec!["1".to_string(), "x".into(), "y".into()];
        let e = |i| unit_vector(3, i);
        let z = vec![0; 3];
        let mul = vec![vec![e(0), e(1), e(2)], vec![e(1), z.clone(), z.clone()], vec![e(2), z.clone(), z]];
        let alg = FiniteAlgebra::new(2, labels, mul, vec![e(1), e(2)], None).unwrap();
        let spaces = h_spaces(&alg, DEFAULT_H_BUDGET).unwrap();
        let dims = (spaces.hom.len(), spaces.z.len(), spaces.b.len());
        assert_eq!(dims, brute_force_dims(&alg, 1 << 20).unwrap());
        assert_eq!(dims, (4, 1, 1));
        let t3 = FiniteAlgebra::polynomial_quotient(3, &[0, 0, 0, 1], &[vec![0, 1, 0]]).unwrap();
        let spaces = h_spaces(&t3, DEFAULT_H_BUDGET).unwrap();
        assert_eq!((spaces.hom.len(), spaces.z.len(), spaces.b.len()), brute_force_dims(&t3, 1 << 20).unwrap());
    }

    #[test]
    fn functoriality_and_base_change() {
        let alg = FiniteAlgebra::nonprincipal_h(2).unwrap();
        let dh = compute_h(&alg, DEFAULT_H_BUDGET).unwrap().dim_h;
        let id = super::super::algebra::identity(10);
        let r = h_functoriality_check(&alg, None, &id, DEFAULT_H_BUDGET).unwrap();
        assert!(r.z_maps_to_z && r.b_maps_to_b);
        assert_eq!(r.induced_rank, dh);
        let zero = vec![vec![0; 10]; 10];
        assert_eq!(h_functoriality_check(&alg, None, &zero, DEFAULT_H_BUDGET).unwrap().induced_rank, 0);
        let lifted = FiniteAlgebra::nonprincipal_h_lifted(2).unwrap();
        let b = annihilator_base_change(&lifted, DEFAULT_H_BUDGET).unwrap();
        assert!(b.equal && b.dim_h >= 1 && b.dim_annihilator == 5, "{b:?}");
    }

    #[test]
    fn direct_sums_add() {
        let alg = FiniteAlgebra::nonprincipal_h(2).unwrap();
        let single = compute_h(&alg, DEFAULT_H_BUDGET).unwrap();
        let double = compute_h(&alg.doubled_module().unwrap(), DEFAULT_H_BUDGET).unwrap();
        assert_eq!(double.dim_h, 2 * single.dim_h);
        assert_eq!(double.dim_z, 2 * single.dim_z);
    }
}
