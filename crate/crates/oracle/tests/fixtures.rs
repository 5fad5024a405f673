use std::path::Path;

use nalgebra::DMatrix;
use strata_core::Class;
use strata_oracle::*;

#[test]
fn every_builtin_fixture_passes() {
    for name in fixture_names() {
        let out = fixture_check(name).unwrap();
        assert!(out.passed, "{name}: {:?}", out.diffs);
    }
}

#[test]
fn registry_files_match_the_embedded_copies() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/fixtures");
    let on_disk = load_fixture_dir(&dir).unwrap();
    let mut names: Vec<&str> = fixture_names();
    names.sort();
    assert_eq!(on_disk.iter().map(|f| f.name.as_str()).collect::<Vec<_>>(), names);
    for f in on_disk {
        assert_eq!(f, builtin_fixture(&f.name).unwrap());
    }
}

#[test]
fn unknown_fixture() {
    assert!(matches!(fixture_check("nosuch"), Err(OracleError::UnknownFixture(_))));
}

#[test]
fn a_wrong_expectation_fails_with_a_diff() {
    let mut f = builtin_fixture("ci3").unwrap();
    f.expect.points[0].value = Some("-2.001".into());
    let out = check_fixture(&f).unwrap();
    assert!(!out.passed);
    assert!(out.diffs.iter().any(|d| d.contains("-2.001")), "{:?}", out.diffs);
}

#[test]
fn ci4_ind_on_the_five_intervals() {
    let r = builtin_fixture("ci4").unwrap().report().unwrap();
    let cuts = [0.0, 88.0 / 49.0, 4.0, 12.0];
    let mids = [-1.0, cuts[1] / 2.0, (cuts[1] + cuts[2]) / 2.0, (cuts[2] + cuts[3]) / 2.0, 13.0];
    let ind: Vec<i64> = mids.iter().map(|&c| ind_of_report(&r.minus_constant(c)).unwrap()).collect();
    assert_eq!(ind, [0, 1, -2, 1, 0]);
    assert!(ind_of_report(&r.minus_constant(4.0)).is_err());
}

#[test]
fn ind_is_invariant_under_coordinate_permutations() {
    let f = builtin_fixture("ci4").unwrap().polynomial().unwrap();
    let g = &f - &Polynomial::constant(3, 1.0).unwrap();
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let base = critical_points(&g, &CriticalOptions::default()).unwrap();
    for perm in perms {
        let r = critical_points(&g.permuted(&perm), &CriticalOptions::default()).unwrap();
        assert_eq!(ind_of_report(&r).unwrap(), 1, "{perm:?}");
        let values = |r: &CriticalReport| r.points.iter().map(|p| p.value).collect::<Vec<_>>();
        assert!(values(&r).iter().zip(values(&base)).all(|(a, b)| (a - b).abs() < 1e-9));
    }
}

fn finite_difference_hessian(p: &Polynomial, x: &[f64], h: f64) -> DMatrix<f64> {
    let n = x.len();
    let f = |dx: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(i, d) in dx {
            y[i] += d;
        }
        p.eval(&y)
    };
    DMatrix::from_fn(n, n, |i, j| {
        (f(&[(i, h), (j, h)]) - f(&[(i, h), (j, -h)]) - f(&[(i, -h), (j, h)]) + f(&[(i, -h), (j, -h)])) / (4.0 * h * h)
    })
}

#[test]
fn signatures_agree_with_finite_differences() {
    for name in ["ci4", "e258", "ci3", "1216", "cur2", "in9"] {
        let fixture = builtin_fixture(name).unwrap();
        let p = fixture.polynomial().unwrap();
        let d = Derivatives::new(&p);
        for cp in fixture.report().unwrap().points.iter().filter(|c| !c.is_degenerate()) {
            let fd = finite_difference_hessian(&p, &cp.coords, 1e-5);
            let n = cp.coords.len();
            for i in 0..n {
                for j in 0..n {
                    let exact = d.hessian[i][j].eval(&cp.coords);
                    if exact.abs() > 1e-3 {
                        assert_eq!(exact.signum(), fd[(i, j)].signum(), "{name} at {:?}", cp.coords);
                    }
                }
            }
            let eig = fd.symmetric_eigen().eigenvalues;
            let neg = eig.iter().filter(|&&e| e < 0.0).count();
            assert_eq!(Some(neg), cp.morse_index, "{name} at {:?}", cp.coords);
        }
    }
}

#[test]
fn versal_members_from_the_normal_forms() {
    let p = versal_polynomial(Class::P8One, 0.0, &[0.0; 7]).unwrap();
    assert_eq!(p.to_string(), "x^3 + y^3 + z^3");
    assert!(versal_polynomial(Class::X9Plus, -3.0, &[0.0; 8]).is_err());
    let mut l = [0.0; 7];
    l[0] = -1.0;
    let q = versal_polynomial(Class::P8Two, 2.0, &l).unwrap();
    assert_eq!(q, Polynomial::parse("x^3+y^3+z^3-6*x*y*z-1", 3).unwrap());
}

#[test]
fn translation_examples() {
    let f = Polynomial::parse("x^4+x^3+y^4", 2).unwrap();
    assert_eq!(t_translate(&f, Class::X9Plus).unwrap().coefficient([3, 0, 0]), 0.0);
    let g = versal_polynomial(Class::X9Plus, 0.3, &[1.0, 0.5, -0.5, 2.0, 0.0, 1.0, 0.1, 0.2]).unwrap();
    assert_eq!(t_translate(&g, Class::X9Plus).unwrap(), g);
}

#[test]
fn j_equation_roots() {
    let roots = solve_j_equation();
    assert_eq!(roots.len(), 2);
    assert!((roots[0] + 11.118).abs() < 1e-3 && (roots[1] + 1.395).abs() < 1e-3);
    assert!(roots.iter().all(|&a| a < -1.0 && j_residual(a).abs() < 1e-9));
}

#[test]
fn families_stay_off_the_discriminant() {
    for name in family_names() {
        let fam = builtin_family(name).unwrap();
        let r = family_scan(&fam, &fam.grid(16)).unwrap();
        assert!(r.is_clear(), "{name}: touches at {:?}", r.touches);
        assert!(r.samples.iter().all(|s| !s.suspect_missed), "{name}");
        let counts: Vec<usize> = r.samples.iter().map(|s| s.real_count).collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]), "{name}: {counts:?}");
    }
}

#[test]
fn fam1_ends_are_the_two_symmetric_quartics() {
    let fam = builtin_family("fam1").unwrap();
    let u1 = Polynomial::parse("x^4+2*0.99*x^2*y^2+y^4+2*x^2-2*y^2+1/2", 2).unwrap();
    let u2 = Polynomial::parse("x^4+2*0.99*x^2*y^2+y^4-2*x^2+2*y^2+1/2", 2).unwrap();
    assert!(fam.member(0.0).unwrap().distance(&u1) < 1e-12);
    assert!(fam.member(std::f64::consts::FRAC_PI_2).unwrap().distance(&u2) < 1e-12);
}
