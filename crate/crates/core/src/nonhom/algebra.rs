use serde_json::{json, Value};

use super::fp::{self, FpSpace};
use crate::arith::{self, add_mod, mul_mod};
use crate::error::{Error, Result};

/// A module over a [`FiniteAlgebra`], given by the action of each basis
/// element of the algebra as a matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleData {
    pub basis: Vec<String>,
    pub action: Vec<Vec<Vec<u64>>>,
}

/// A finite-dimensional commutative algebra `R` over `F_p`, an ideal `I` and
/// an `R`-module `M` (`M = R` when no module is given).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    p: u64,
    basis: Vec<String>,
    mul: Vec<Vec<Vec<u64>>>,
    ideal: Vec<Vec<u64>>,
    module: Option<ModuleData>,
    unit: Vec<u64>,
}

fn check_entries(p: u64, v: &[u64], pointer: &str) -> Result<()> {
    match v.iter().position(|&x| x >= p) {
        Some(i) => Err(Error::invalid(format!("{pointer}/{i}"), format!("entry {} is not reduced mod {p}", v[i]))),
        None => Ok(()),
    }
}

impl FiniteAlgebra {
    /// Validate the structure constants (`mul[i][j]` is `e_i e_j`), find the
    /// unit, check commutativity, associativity, that `ideal` spans an ideal,
    /// and that the module action is a representation.
    pub fn new(
        p: u64,
        basis: Vec<String>,
        mul: Vec<Vec<Vec<u64>>>,
        ideal: Vec<Vec<u64>>,
        module: Option<ModuleData>,
    ) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let d = basis.len();
        if d == 0 {
            return Err(Error::invalid("/basis", "the algebra needs a basis"));
        }
        if mul.len() != d || mul.iter().any(|r| r.len() != d || r.iter().any(|v| v.len() != d)) {
            return Err(Error::DimensionMismatch(format!("structure constants must be {d}x{d}x{d}")));
        }
        for (i, r) in mul.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                check_entries(p, v, &format!("/mul/{i}/{j}"))?;
            }
        }
        for (k, v) in ideal.iter().enumerate() {
            if v.len() != d {
                return Err(Error::DimensionMismatch(format!("ideal vector {k} has length {}", v.len())));
            }
            check_entries(p, v, &format!("/ideal/{k}"))?;
        }
        let ideal = FpSpace::span(p, d, &ideal).basis().to_vec();
        let mut alg = FiniteAlgebra {
            p,
            basis,
            mul,
            ideal,
            module: None,
            unit: vec![0; d],
        };
        alg.unit = alg.find_unit()?;
        alg.check_ring_axioms()?;
        alg.check_ideal()?;
        if let Some(m) = module {
            alg.set_module(m)?;
        }
        Ok(alg)
    }

    fn find_unit(&self) -> Result<Vec<u64>> {
        let d = self.dim();
        // u e_j = e_j for all j: stack the d systems.
        let cols: Vec<Vec<u64>> = (0..d)
            .map(|i| (0..d).flat_map(|j| self.mul[i][j].clone()).collect())
            .collect();
        let target: Vec<u64> = (0..d).flat_map(|j| (0..d).map(move |k| u64::from(j == k))).collect();
        fp::solve(self.p, &cols, &target).ok_or_else(|| Error::InconsistentData("the algebra has no unit".into()))
    }

    fn check_ring_axioms(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if self.mul[i][j] != self.mul[j][i] {
                    return Err(Error::InconsistentData(format!(
                        "{} * {} is not commutative",
                        self.basis[i], self.basis[j]
                    )));
                }
                for k in 0..d {
                    let left = self.multiply(&self.mul[i][j], &unit_vector(d, k));
                    let right = self.multiply(&unit_vector(d, i), &self.mul[j][k]);
                    if left != right {
                        return Err(Error::InconsistentData(format!(
                            "({0} {1}) {2} != {0} ({1} {2})",
                            self.basis[i], self.basis[j], self.basis[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_ideal(&self) -> Result<()> {
        let space = FpSpace::span(self.p, self.dim(), &self.ideal);
        for t in &self.ideal {
            for i in 0..self.dim() {
                if !space.contains(&self.multiply(&unit_vector(self.dim(), i), t)) {
                    return Err(Error::NotAnIdeal(format!(
                        "{} times {} leaves the ideal",
                        self.basis[i],
                        self.render(t)
                    )));
                }
            }
        }
        Ok(())
    }

    fn set_module(&mut self, m: ModuleData) -> Result<()> {
        let d = self.dim();
        let dm = m.basis.len();
        if m.action.len() != d || m.action.iter().any(|a| a.len() != dm || a.iter().any(|r| r.len() != dm)) {
            return Err(Error::DimensionMismatch(format!("module action must be {d} matrices of size {dm}x{dm}")));
        }
        for (i, a) in m.action.iter().enumerate() {
            for (r, row) in a.iter().enumerate() {
                check_entries(self.p, row, &format!("/module/action/{i}/{r}"))?;
            }
        }
        self.module = Some(m);
        let unit = self.action(&self.unit.clone());
        if unit != identity(dm) {
            self.module = None;
            return Err(Error::InconsistentData("the unit does not act as the identity".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = matmul(self.p, &self.action(&unit_vector(d, i)), &self.action(&unit_vector(d, j)));
                if lhs != self.action(&self.mul[i][j].clone()) {
                    self.module = None;
                    return Err(Error::InconsistentData(format!(
                        "the action of {} {} is not the product of the actions",
                        self.basis[i], self.basis[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn unit(&self) -> &[u64] {
        &self.unit
    }

    /// Echelon basis of the ideal.
    pub fn ideal(&self) -> &[Vec<u64>] {
        &self.ideal
    }

    pub fn module(&self) -> Option<&ModuleData> {
        self.module.as_ref()
    }

    pub fn module_dim(&self) -> usize {
        self.module.as_ref().map_or(self.dim(), |m| m.basis.len())
    }

    pub fn module_basis(&self) -> &[String] {
        self.module.as_ref().map_or(&self.basis, |m| &m.basis)
    }

    /// The same algebra and module with a different ideal.
    pub fn with_ideal(&self, generators: &[Vec<u64>]) -> Result<Self> {
        let d = self.dim();
        let mut span = Vec::new();
        for g in generators {
            if g.len() != d {
                return Err(Error::DimensionMismatch(format!("ideal generator of length {}", g.len())));
            }
            check_entries(self.p, g, "/ideal")?;
            for i in 0..d {
                span.push(self.multiply(&unit_vector(d, i), g));
            }
        }
        let mut alg = self.clone();
        alg.ideal = FpSpace::span(self.p, d, &span).basis().to_vec();
        Ok(alg)
    }

    /// The same algebra and ideal acting on another module.
    pub fn with_module(&self, module: Option<ModuleData>) -> Result<Self> {
        let mut alg = self.clone();
        alg.module = None;
        if let Some(m) = module {
            alg.set_module(m)?;
        }
        Ok(alg)
    }

    pub fn multiply(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.dim()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    fp::axpy(self.p, &mut out, mul_mod(x, y, self.p), &self.mul[i][j]);
                }
            }
        }
        out
    }

    /// Matrix of `m -> r m` on the module.
    pub fn action(&self, r: &[u64]) -> Vec<Vec<u64>> {
        match &self.module {
            Some(m) => {
                let dm = m.basis.len();
                let mut out = vec![vec![0; dm]; dm];
                for (i, &c) in r.iter().enumerate() {
                    if c != 0 {
                        for (row, arow) in out.iter_mut().zip(&m.action[i]) {
                            fp::axpy(self.p, row, c, arow);
                        }
                    }
                }
                out
            }
            None => {
                let d = self.dim();
                let cols: Vec<Vec<u64>> = (0..d).map(|j| self.multiply(r, &unit_vector(d, j))).collect();
                fp::transpose(&cols, d)
            }
        }
    }

    /// `x` written on the basis labels, e.g. `x + 2xz`.
    pub fn render(&self, v: &[u64]) -> String {
        render_on(&self.basis, v)
    }

    pub fn render_module(&self, v: &[u64]) -> String {
        render_on(self.module_basis(), v)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "p": self.p,
            "dim": self.dim(),
            "basis": self.basis,
            "mul": self.mul,
            "ideal": self.ideal,
        });
        if let Some(m) = &self.module {
            v["module"] = json!({"dim": m.basis.len(), "basis": m.basis, "action": m.action});
        }
        v
    }

    /// Parse `{p, dim, basis, mul, ideal, module?: {dim, action, basis?}}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::invalid("/p", "expected a prime"))?;
        let basis = labels(v.get("basis"), v.get("dim"), "")?;
        let mul = cube(v.get("mul"), "/mul")?;
        let ideal = matrix(v.get("ideal"), "/ideal")?;
        let module = match v.get("module") {
            None | Some(Value::Null) => None,
            Some(m) => Some(ModuleData {
                basis: labels(m.get("basis"), m.get("dim"), "/module")?,
                action: cube(m.get("action"), "/module/action")?,
            }),
        };
        FiniteAlgebra::new(p, basis, mul, ideal, module)
    }
}

fn labels(basis: Option<&Value>, dim: Option<&Value>, pointer: &str) -> Result<Vec<String>> {
    let dim = dim.map(|d| {
        d.as_u64()
            .ok_or_else(|| Error::invalid(format!("{pointer}/dim"), "expected a dimension"))
    });
    match basis {
        Some(Value::Array(a)) => {
            let out = a
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    s.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::invalid(format!("{pointer}/basis/{i}"), "expected a label"))
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(d) = dim {
                if d? != out.len() as u64 {
                    return Err(Error::invalid(format!("{pointer}/dim"), "dimension does not match the basis"));
                }
            }
            Ok(out)
        }
        Some(_) => Err(Error::invalid(format!("{pointer}/basis"), "expected an array of labels")),
        None => match dim {
            Some(d) => Ok((0..d?).map(|i| format!("e{i}")).collect()),
            None => Err(Error::invalid(format!("{pointer}/dim"), "missing dimension")),
        },
    }
}

fn vector(v: &Value, pointer: &str) -> Result<Vec<u64>> {
    v.as_array()
        .ok_or_else(|| Error::invalid(pointer, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_u64()
                .ok_or_else(|| Error::invalid(format!("{pointer}/{i}"), "expected a nonnegative integer"))
        })
        .collect()
}

fn matrix(v: Option<&Value>, pointer: &str) -> Result<Vec<Vec<u64>>> {
    v.and_then(Value::as_array)
        .ok_or_else(|| Error::invalid(pointer, "expected an array of vectors"))?
        .iter()
        .enumerate()
        .map(|(i, r)| vector(r, &format!("{pointer}/{i}")))
        .collect()
}

fn cube(v: Option<&Value>, pointer: &str) -> Result<Vec<Vec<Vec<u64>>>> {
    v.and_then(Value::as_array)
        .ok_or_else(|| Error::invalid(pointer, "expected a three-dimensional array"))?
        .iter()
        .enumerate()
        .map(|(i, m)| matrix(Some(m), &format!("{pointer}/{i}")))
        .collect()
}

pub(crate) fn unit_vector(d: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; d];
    v[i] = 1;
    v
}

pub(crate) fn identity(d: usize) -> Vec<Vec<u64>> {
    (0..d).map(|i| unit_vector(d, i)).collect()
}

pub(crate) fn matmul(p: u64, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let bt = fp::transpose(b, b.first().map_or(0, Vec::len));
    a.iter()
        .map(|row| {
            bt.iter()
                .map(|col| row.iter().zip(col).fold(0, |acc, (x, y)| add_mod(acc, mul_mod(*x, *y, p), p)))
                .collect()
        })
        .collect()
}

fn render_on(labels: &[String], v: &[u64]) -> String {
    let terms: Vec<String> = v
        .iter()
        .zip(labels)
        .filter(|(c, _)| **c != 0)
        .map(|(&c, l)| match (c, l.as_str()) {
            (1, l) => l.to_string(),
            (c, "1") => c.to_string(),
            (c, l) => format!("{c}{l}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Monomials of degree at most 2 in four variables, in the order
/// `1, x, y, z, w, xx, xy, xz, xw, yy, yz, yw, zz, zw, ww`.
fn quadratic_monomials() -> Vec<[u8; 4]> {
    let mut out = vec![[0; 4]];
    for i in 0..4 {
        let mut e = [0; 4];
        e[i] = 1;
        out.push(e);
    }
    for i in 0..4 {
        for j in i..4 {
            let mut e = [0; 4];
            e[i] += 1;
            e[j] += 1;
            out.push(e);
        }
    }
    out
}

fn monomial_label(e: &[u8; 4], vars: [&str; 4]) -> String {
    if e.iter().all(|&x| x == 0) {
        return "1".into();
    }
    let mut s = String::new();
    for (k, &n) in e.iter().enumerate() {
        match n {
            0 => {}
            1 => s.push_str(vars[k]),
            n => s.push_str(&format!("{}^{n}", vars[k])),
        }
    }
    s
}

/// Structure constants for a quotient of `k[x, y, z, w]` in which every
/// degree-3 monomial vanishes; `normal_form` sends a monomial of degree at
/// most 2 to a basis index, or `None` when it is zero.
fn quadratic_quotient(p: u64, basis: &[[u8; 4]], normal_form: impl Fn(&[u8; 4]) -> Option<usize>) -> Vec<Vec<Vec<u64>>> {
    let d = basis.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let e: [u8; 4] = std::array::from_fn(|k| basis[i][k] + basis[j][k]);
                    let mut v = vec![0; d];
                    if e.iter().map(|&x| x as u32).sum::<u32>() <= 2 {
                        if let Some(k) = normal_form(&e) {
                            v[k] = 1 % p;
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

const LOWER: [&str; 4] = ["x", "y", "z", "w"];
const UPPER: [&str; 4] = ["X", "Y", "Z", "W"];

/// Basis `1, x, y, z, w, x^2, xy, y^2, xz, xw` of
/// `k[x, y, z, w] / ((x, y, z, w)^3 + (z^2, zw, w^2, yw, yz - xw))`.
fn nonprincipal_basis() -> Vec<[u8; 4]> {
    vec![
        [0, 0, 0, 0],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [2, 0, 0, 0],
        [1, 1, 0, 0],
        [0, 2, 0, 0],
        [1, 0, 1, 0],
        [1, 0, 0, 1],
    ]
}

fn nonprincipal_normal_form(e: &[u8; 4]) -> Option<usize> {
    let basis = nonprincipal_basis();
    if let Some(i) = basis.iter().position(|b| b == e) {
        return Some(i);
    }
    // yz = xw; z^2, zw, w^2, yw vanish.
    (*e == [0, 1, 1, 0]).then_some(9)
}

impl FiniteAlgebra {
    /// The 10-dimensional local algebra
    /// `k[x, y, z, w] / ((x, y, z, w)^3 + (z^2, zw, w^2, yw, yz - xw))` over
    /// `F_p` with `I = (x, y)` and `M = R`. Here `H(I, R)` is nonzero:
    /// `x -> xz` (and 0 on the rest of the basis of `I`) is not principal.
    pub fn nonprincipal_h(p: u64) -> Result<Self> {
        let basis = nonprincipal_basis();
        let mul = quadratic_quotient(p, &basis, nonprincipal_normal_form);
        let labels = basis.iter().map(|e| monomial_label(e, LOWER)).collect();
        let d = basis.len();
        let alg = FiniteAlgebra::new(p, labels, mul, vec![], None)?;
        alg.with_ideal(&[unit_vector(d, 1), unit_vector(d, 2)])
    }

    /// `k[X, Y, Z, W] / (X, Y, Z, W)^3` acting on the 10-dimensional algebra
    /// of [`FiniteAlgebra::nonprincipal_h`] through the quotient map, with
    /// `I = (X, Y)`.
    pub fn nonprincipal_h_lifted(p: u64) -> Result<Self> {
        let big = quadratic_monomials();
        let mul = quadratic_quotient(p, &big, |e| big.iter().position(|b| b == e));
        let labels: Vec<String> = big.iter().map(|e| monomial_label(e, UPPER)).collect();
        let small = FiniteAlgebra::nonprincipal_h(p)?;
        let ds = small.dim();
        let action = big
            .iter()
            .map(|e| {
                let image = nonprincipal_normal_form(e).map_or(vec![0; ds], |k| unit_vector(ds, k));
                small.action(&image)
            })
            .collect();
        let module = ModuleData {
            basis: small.basis().to_vec(),
            action,
        };
        let d = big.len();
        let alg = FiniteAlgebra::new(p, labels, mul, vec![], Some(module))?;
        alg.with_ideal(&[unit_vector(d, 1), unit_vector(d, 2)])
    }

    /// Built-in fixtures by name: `nonprincipal-h` (alias `paper-example`)
    /// and `nonprincipal-h-lifted`.
    pub fn fixture(name: &str, p: u64) -> Result<Self> {
        match name {
            "nonprincipal-h" | "paper-example" => FiniteAlgebra::nonprincipal_h(p),
            "nonprincipal-h-lifted" => FiniteAlgebra::nonprincipal_h_lifted(p),
            other => Err(Error::invalid("/fixture", format!("unknown fixture {other:?}"))),
        }
    }

    /// `F_p[t] / (f)` for a monic `f` (ascending coefficients, leading 1
    /// included), with basis `1, t, ..., t^(deg f - 1)` and the given ideal
    /// generators.
    pub fn polynomial_quotient(p: u64, f: &[u64], generators: &[Vec<u64>]) -> Result<Self> {
        let Some((&lead, low)) = f.split_last() else {
            return Err(Error::invalid("/f", "empty polynomial"));
        };
        if lead != 1 || low.is_empty() {
            return Err(Error::invalid("/f", "expected a monic polynomial of positive degree"));
        }
        let d = low.len();
        // t^k reduced mod f for k < 2d - 1.
        let mut powers: Vec<Vec<u64>> = (0..d).map(|k| unit_vector(d, k)).collect();
        for _ in d..2 * d - 1 {
            let prev = powers.last().unwrap();
            let mut next = vec![0; d];
            next[1..].copy_from_slice(&prev[..d - 1]);
            let top = prev[d - 1];
            for (n, &c) in next.iter_mut().zip(low) {
                *n = arith::sub_mod(*n, mul_mod(top, c % p, p), p);
            }
            powers.push(next);
        }
        let mul = (0..d).map(|i| (0..d).map(|j| powers[i + j].clone()).collect()).collect();
        let labels = (0..d)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "t".to_string(),
                k => format!("t^{k}"),
            })
            .collect();
        FiniteAlgebra::new(p, labels, mul, vec![], None)?.with_ideal(generators)
    }

    /// The product `R_1 x ... x R_n` with `M = R` and the product ideal.
    pub fn product(parts: &[FiniteAlgebra]) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::invalid("/parts", "empty product"));
        };
        let p = first.p;
        if parts.iter().any(|a| a.p != p || a.module.is_some()) {
            return Err(Error::invalid("/parts", "factors must share p and act on themselves"));
        }
        let d: usize = parts.iter().map(FiniteAlgebra::dim).sum();
        let mut mul = vec![vec![vec![0; d]; d]; d];
        let mut labels = Vec::new();
        let mut ideal = Vec::new();
        let mut off = 0;
        for (n, a) in parts.iter().enumerate() {
            let k = a.dim();
            for i in 0..k {
                for j in 0..k {
                    mul[off + i][off + j][off..off + k].copy_from_slice(&a.mul[i][j]);
                }
                labels.push(format!("{}_{n}", a.basis[i]));
            }
            for t in &a.ideal {
                let mut v = vec![0; d];
                v[off..off + k].copy_from_slice(t);
                ideal.push(v);
            }
            off += k;
        }
        FiniteAlgebra::new(p, labels, mul, ideal, None)
    }

    /// The module `M ⊕ M`.
    pub fn doubled_module(&self) -> Result<Self> {
        let dm = self.module_dim();
        let labels = self.module_basis();
        let basis = labels
            .iter()
            .map(|l| format!("{l}'"))
            .chain(labels.iter().map(|l| format!("{l}''")))
            .collect();
        let action = (0..self.dim())
            .map(|i| {
                let a = self.action(&unit_vector(self.dim(), i));
                let mut out = vec![vec![0; 2 * dm]; 2 * dm];
                for r in 0..dm {
                    out[r][..dm].copy_from_slice(&a[r]);
                    out[dm + r][dm..].copy_from_slice(&a[r]);
                }
                out
            })
            .collect();
        self.with_module(Some(ModuleData { basis, action }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        let a = FiniteAlgebra::nonprincipal_h(2).unwrap();
        assert_eq!(a.dim(), 10);
        assert_eq!(a.ideal().len(), 7);
        assert_eq!(a.unit(), &unit_vector(10, 0)[..]);
        // y z = x w
        assert_eq!(a.multiply(&unit_vector(10, 2), &unit_vector(10, 3)), unit_vector(10, 9));
        let lifted = FiniteAlgebra::nonprincipal_h_lifted(3).unwrap();
        assert_eq!((lifted.dim(), lifted.module_dim(), lifted.ideal().len()), (15, 10, 9));
    }

    #[test]
    fn rejects_bad_data() {
        let labels = vec!["1".to_string(), "e".to_string()];
        // e * e = 1 + e over F_2: commutative, associative, unital.
        let mul = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]];
        assert!(FiniteAlgebra::new(2, labels.clone(), mul.clone(), vec![], None).is_ok());
        assert!(matches!(
            FiniteAlgebra::new(2, labels.clone(), mul.clone(), vec![vec![0, 1]], None),
            Err(Error::NotAnIdeal(_))
        ));
        let bad = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![1, 1], vec![1, 1]]];
        assert!(FiniteAlgebra::new(2, labels.clone(), bad, vec![], None).is_err());
        assert!(FiniteAlgebra::new(4, labels, mul, vec![], None).is_err());
    }

    #[test]
    fn polynomial_quotients_and_products() {
        // F_3[t]/(t^2 + 1) is the field with 9 elements.
        let f9 = FiniteAlgebra::polynomial_quotient(3, &[1, 0, 1], &[vec![1, 0]]).unwrap();
        assert_eq!(f9.multiply(&[0, 1], &[0, 1]), vec![2, 0]);
        let prod = FiniteAlgebra::product(&[f9.clone(), f9]).unwrap();
        assert_eq!(prod.unit(), &[1, 0, 1, 0]);
        assert_eq!(prod.ideal().len(), 4);
    }

    #[test]
    fn json_round_trip() {
        let a = FiniteAlgebra::nonprincipal_h_lifted(2).unwrap();
        assert_eq!(FiniteAlgebra::from_json(&a.to_json()).unwrap(), a);
        let err = FiniteAlgebra::from_json(&json!({"p": 2, "dim": 1, "mul": [[[3]]], "ideal": []}));
        assert!(matches!(err, Err(Error::InvalidInput { ref pointer, .. }) if pointer == "/mul/0/0/0"));
    }
}
