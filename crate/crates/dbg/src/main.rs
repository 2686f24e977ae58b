use transradii::*;
use transradii::deviation::deviation_at;
use num_complex::Complex64;
use nalgebra::DVector;
fn c(re: f64, im: f64) -> Complex64 { Complex64::new(re, im) }
fn main() {
    let t = ComplexMatrix::from_rows(&[
        vec![c(0.0,0.0), c(1.0,0.0)],
        vec![c(0.0,0.0), c(0.0,0.0)],
    ]).unwrap();
    let pair = validate_pair(t.clone(), ComplexMatrix::identity(2), ToleranceSet::default()).unwrap();
    // one random-ish start, trace value/resid over the iteration manually
    let mut f = UnitVector::new(&[c(0.3,-0.7), c(0.55,0.2)]).unwrap();
    for it in 0..12 {
        let rep = deviation_at(&pair, &f).unwrap();
        let lam = rep.lambda;
        let tm = nalgebra::DMatrix::from_fn(2,2,|i,j| t.entry(i,j)) - nalgebra::DMatrix::<Complex64>::identity(2,2)*lam;
        let b = tm.adjoint() * &tm;
        let rvec = &b * f.as_dvector() - f.as_dvector().map(|z| z*Complex64::from(rep.value*rep.value));
        println!("it {it}: value {:.12} resid {:.3e} lam {:.6}", rep.value, rvec.norm(), lam);
        // emulate top-branch step
        let eig = nalgebra::SymmetricEigen::new(b.clone());
        let (k, _) = eig.eigenvalues.iter().enumerate().max_by(|a,b| a.1.partial_cmp(b.1).unwrap()).unwrap();
        let v = eig.eigenvectors.column(k).into_owned();
        let ov: Complex64 = f.as_dvector().iter().zip(v.iter()).map(|(x,y)| x*y.conj()).sum();
        let vph: DVector<Complex64> = if ov.norm() > 1e-14 { v.map(|z| z*ov.conj()/Complex64::from(ov.norm())) } else { v };
        let cand = UnitVector::new(vph.as_slice()).unwrap();
        let cval = deviation_at(&pair, &cand).unwrap().value;
        println!("        eigen cand value {:.12} (accept needs > {:.12})", cval, rep.value);
        f = cand;
    }
}
