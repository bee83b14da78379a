use fracmin::quad::QuadConfig;
use std::time::Instant;

fn main() {
    let cfg = QuadConfig::with_tol(2e-4, 1e-4);
    let icfg = cfg.inner();
    let spec = fracmin::cones::ConeSpec::new(2, 2, 0.5, 1.0).unwrap();
    for u in [1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6, 1e-7] {
        let t = Instant::now();
        let p = fracmin::cones::paired_slice_dbg(&spec, u, &icfg);
        println!(
            "u = {u:.1e}: P = {p:+.8e}  P*u^s = {:+.8e}   [{:?}]",
            p * u.powf(spec.s),
            t.elapsed()
        );
    }
}
