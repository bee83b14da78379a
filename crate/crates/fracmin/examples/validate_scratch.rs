use fracmin::quad::QuadConfig;
use fracmin::{cones, stability};
use std::time::Instant;

fn main() {
    let cfg = QuadConfig::with_tol(1e-7, 1e-6);

    let t = Instant::now();
    let h21 = stability::hardy_constant(2, 1, 0.0, &cfg).unwrap();
    println!("H(2,1,0) = {:.6} (expect 0.814105)  [{:?}]", h21.value, t.elapsed());

    let t = Instant::now();
    let a21 = stability::a0_squared(2, 1, 0.0, &cfg).unwrap();
    println!("A0(2,1,0)^2 = {:.6} (expect 4.081049)  [{:?}]", a21.value, t.elapsed());

    let t = Instant::now();
    let h43 = stability::hardy_constant(4, 3, 0.0, &cfg).unwrap();
    let a43 = stability::a0_squared(4, 3, 0.0, &cfg).unwrap();
    println!(
        "H(4,3,0) = {:.6} (expect 0.447829)  A0^2 = {:.6} (expect 0.428921)  [{:?}]",
        h43.value,
        a43.value,
        t.elapsed()
    );

    let t = Instant::now();
    let h77 = stability::hardy_constant(7, 7, 0.0, &cfg).unwrap();
    let a77 = stability::a0_squared(7, 7, 0.0, &cfg).unwrap();
    println!(
        "H(7,7,0) = {:.6} (expect 0.014170)  A0^2 = {:.6} (expect 0.007707)  [{:?}]",
        h77.value,
        a77.value,
        t.elapsed()
    );

    let hcfg = QuadConfig::with_tol(2e-4, 1e-4);
    let t = Instant::now();
    let spec = cones::ConeSpec::new(2, 2, 0.5, 1.0).unwrap();
    let h = cones::cone_h(&spec, &hcfg).unwrap();
    println!("cone_H(2,2,0.5,1) = {:+.6e} (expect ~0)  [{:?}]", h, t.elapsed());

    let t = Instant::now();
    let spec = cones::ConeSpec::new(2, 1, 0.5, 0.05).unwrap();
    let h = cones::cone_h(&spec, &hcfg).unwrap();
    println!("cone_H(2,1,0.5,0.05) = {:+.6e} (expect >0)  [{:?}]", h, t.elapsed());

    let t = Instant::now();
    let spec = cones::ConeSpec::new(3, 1, 0.5, 1.0).unwrap();
    let h = cones::cone_h(&spec, &hcfg).unwrap();
    println!("cone_H(3,1,0.5,1) = {:+.6e} (expect <=0)  [{:?}]", h, t.elapsed());

    let t = Instant::now();
    let ap = cones::aperture(2, 1, 0.5, 1e-4, &hcfg).unwrap();
    println!(
        "aperture(2,1,0.5) = {:.6} residual {:.2e} iters {}  [{:?}]",
        ap.alpha, ap.residual, ap.iterations, t.elapsed()
    );

    let t = Instant::now();
    let ap = cones::aperture(2, 1, 0.05, 1e-4, &hcfg).unwrap();
    println!(
        "aperture(2,1,0.05) = {:.6} (alpha0 = 0.577350)  [{:?}]",
        ap.alpha,
        t.elapsed()
    );

    let t = Instant::now();
    let ap = cones::aperture(2, 1, 0.99, 1e-5, &hcfg).unwrap();
    println!(
        "aperture(2,1,0.99) = {:.6}; /sqrt(0.01) = {:.3} (expect in [0.7,1.3])  [{:?}]",
        ap.alpha,
        ap.alpha / 0.1,
        t.elapsed()
    );

    // cross-check: half-space subtraction route vs pv route at one config
    let t = Instant::now();
    let spec = cones::ConeSpec::new(2, 1, 0.5, 0.4).unwrap();
    let h_pv = cones::cone_h(&spec, &hcfg).unwrap();
    let h_hs = cones::cone_h_halfspace_route(&spec, &hcfg).unwrap();
    println!(
        "H(2,1,0.5,0.4): pv route {:+.6e} vs half-space route {:+.6e}  [{:?}]",
        h_pv,
        h_hs,
        t.elapsed()
    );
}
