use super::DensityOperator;
use crate::error::{Error, Result};
use crate::tensor::{HermitianEig, MatrixFunction};

/// Weight of `ρ` on the kernel of `σ` above which `S(ρ‖σ)` is infinite.
const SUPPORT_LEAK: f64 = 1e-10;

fn entropy_of_eig(eig: &HermitianEig) -> f64 {
    let cut = eig.cutoff();
    -eig.eigenvalues
        .iter()
        .filter(|l| **l > cut)
        .map(|l| l * l.ln())
        .sum::<f64>()
}

/// `S(ρ) = −Tr ρ log ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    entropy_of_eig(&rho.eig())
}

/// Entropy of the reduction of `rho` onto `labels`.
pub fn entropy_of<S: AsRef<str>>(rho: &DensityOperator, labels: &[S]) -> Result<f64> {
    if labels.len() == rho.layout().len() {
        // full set, possibly permuted
        rho.layout().sub_layout(labels)?;
        return Ok(von_neumann_entropy(rho));
    }
    Ok(von_neumann_entropy(&rho.reduce(labels)?))
}

/// `S(ρ‖σ) = Tr ρ (log ρ − log σ)`, or `+∞` when the support of `ρ` is not
/// contained in the support of `σ`.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if !rho.layout().same_factors(sigma.layout()) {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between {} and {}",
            rho.layout(),
            sigma.layout()
        )));
    }
    let sigma = if sigma.layout() == rho.layout() {
        sigma.clone()
    } else {
        sigma.reordered(rho.layout())?
    };
    let se = sigma.eig();
    let cut = se.cutoff();
    let r = rho.matrix();
    let leak: f64 = se
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| **l <= cut)
        .map(|(j, _)| {
            let w = se.eigenvectors.column(j);
            (w.adjoint() * r * w)[(0, 0)].re
        })
        .sum();
    if leak > SUPPORT_LEAK {
        return Ok(f64::INFINITY);
    }
    let log_sigma = se.apply(MatrixFunction::Log)?;
    let cross = (r * log_sigma).trace().re;
    Ok(-von_neumann_entropy(rho) - cross)
}

fn check_disjoint_cover(rho: &DensityOperator, parts: &[&[String]]) -> Result<()> {
    let mut seen: Vec<&str> = Vec::new();
    for part in parts {
        if part.is_empty() {
            return Err(Error::BadPartition("empty block".into()));
        }
        for l in part.iter() {
            rho.layout().index_of(l)?;
            if seen.contains(&l.as_str()) {
                return Err(Error::BadPartition(format!("label `{l}` appears twice")));
            }
            seen.push(l);
        }
    }
    if seen.len() != rho.layout().len() {
        return Err(Error::BadPartition("blocks do not cover the layout".into()));
    }
    Ok(())
}

fn owned<S: AsRef<str>>(labels: &[S]) -> Vec<String> {
    labels.iter().map(|s| s.as_ref().to_string()).collect()
}

/// `I(1:2) = S(ρ₁) + S(ρ₂) − S(ρ)` for a bipartition of the layout.
pub fn mutual_information<S: AsRef<str>>(
    rho: &DensityOperator,
    part1: &[S],
    part2: &[S],
) -> Result<f64> {
    let (p1, p2) = (owned(part1), owned(part2));
    check_disjoint_cover(rho, &[&p1, &p2])?;
    Ok(entropy_of(rho, &p1)? + entropy_of(rho, &p2)? - von_neumann_entropy(rho))
}

/// `I(A:C|B) = S(AB) + S(BC) − S(B) − S(ABC)` for a three-block partition.
pub fn conditional_mutual_information<S: AsRef<str>>(
    rho: &DensityOperator,
    a: &[S],
    b: &[S],
    c: &[S],
) -> Result<f64> {
    let (a, b, c) = (owned(a), owned(b), owned(c));
    check_disjoint_cover(rho, &[&a, &b, &c])?;
    let ab: Vec<String> = a.iter().chain(&b).cloned().collect();
    let bc: Vec<String> = b.iter().chain(&c).cloned().collect();
    Ok(entropy_of(rho, &ab)? + entropy_of(rho, &bc)?
        - entropy_of(rho, &b)?
        - von_neumann_entropy(rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{SubsystemLayout, C64};

    fn qubits(labels: &[&str]) -> SubsystemLayout {
        SubsystemLayout::qubits(labels.iter().copied()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        let l = qubits(&["A"]);
        let pure = DensityOperator::from_diagonal(l.clone(), &[1.0, 0.0]).unwrap();
        assert!(von_neumann_entropy(&pure).abs() < 1e-15);
        let mixed = DensityOperator::maximally_mixed(qubits(&["A", "B"]));
        assert!((von_neumann_entropy(&mixed) - 4f64.ln()).abs() < 1e-12);
        let l3 = SubsystemLayout::new(["A"], [3]).unwrap();
        let d = DensityOperator::from_diagonal(l3, &[0.5, 1.0 / 3.0, 1.0 / 6.0]).unwrap();
        // −(½ln½ + ⅓ln⅓ + ⅙ln⅙)
        let expect = -(0.5f64 * 0.5f64.ln()
            + (1.0f64 / 3.0) * (1.0f64 / 3.0).ln()
            + (1.0f64 / 6.0) * (1.0f64 / 6.0).ln());
        assert!((von_neumann_entropy(&d) - expect).abs() < 1e-12);
        assert!((expect - 1.011404).abs() < 1e-6);
    }

    #[test]
    fn relative_entropy_examples() {
        let l = qubits(&["A"]);
        let p = DensityOperator::from_diagonal(l.clone(), &[1.0, 0.0]).unwrap();
        let q = DensityOperator::from_diagonal(l.clone(), &[0.0, 1.0]).unwrap();
        assert_eq!(relative_entropy(&p, &q).unwrap(), f64::INFINITY);
        assert!(relative_entropy(&q, &q).unwrap().abs() < 1e-12);
        let s = DensityOperator::from_diagonal(l.clone(), &[0.2, 0.8]).unwrap();
        let u = DensityOperator::maximally_mixed(l);
        // S(σ‖id/d) = log d − S(σ)
        let expect = 2f64.ln() - von_neumann_entropy(&s);
        assert!((relative_entropy(&s, &u).unwrap() - expect).abs() < 1e-12);
        // S(id/d‖σ) = −log d − (1/d) Σ log μ
        let expect = -(2f64.ln()) - 0.5 * (0.2f64.ln() + 0.8f64.ln());
        assert!((relative_entropy(&u, &s).unwrap() - expect).abs() < 1e-12);
        let other = DensityOperator::maximally_mixed(SubsystemLayout::new(["A"], [3]).unwrap());
        assert!(relative_entropy(&s, &other).is_err());
    }

    #[test]
    fn bell_and_classical_mutual_information() {
        let l = qubits(&["A", "B"]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let bell =
            DensityOperator::pure(l.clone(), &[C64::new(h, 0.0), z, z, C64::new(h, 0.0)]).unwrap();
        assert!((mutual_information(&bell, &["A"], &["B"]).unwrap() - 4f64.ln()).abs() < 1e-12);
        let cl = DensityOperator::from_diagonal(l.clone(), &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mutual_information(&cl, &["A"], &["B"]).unwrap() - 2f64.ln()).abs() < 1e-12);
        let prod = DensityOperator::from_diagonal(l, &[0.12, 0.28, 0.18, 0.42]).unwrap();
        assert!(mutual_information(&prod, &["A"], &["B"]).unwrap().abs() < 1e-12);
        assert!(matches!(
            mutual_information(&prod, &["A"], &["A"]),
            Err(Error::BadPartition(_))
        ));
        assert!(matches!(
            mutual_information(&prod, &["A"], &[] as &[&str]),
            Err(Error::BadPartition(_))
        ));
    }

    #[test]
    fn ghz_is_not_markov() {
        let l = qubits(&["A", "B", "C"]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amp = vec![C64::new(0.0, 0.0); 8];
        amp[0] = C64::new(h, 0.0);
        amp[7] = C64::new(h, 0.0);
        let ghz = DensityOperator::pure(l, &amp).unwrap();
        let cmi = conditional_mutual_information(&ghz, &["A"], &["B"], &["C"]).unwrap();
        // S_AB = S_BC = S_B = log 2, S_ABC = 0
        assert!((cmi - 2f64.ln()).abs() < 1e-12);
        assert!(conditional_mutual_information(&ghz, &["A"], &["B"], &["B"]).is_err());
    }
}
