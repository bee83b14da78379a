use fracmin::quad::QuadConfig;

fn main() {
    let cfg = QuadConfig::with_tol(1e-8, 1e-8);
    let icfg = cfg.inner();
    let spec = fracmin::cones::ConeSpec::new(2, 1, 0.5, 0.504782).unwrap();
    for u in [0.5, 0.3, 0.1] {
        let p = fracmin::cones::paired_slice_dbg(&spec, u, &icfg);
        println!("rust paired({u}) = {p:+.8}");
    }
    for r in [3.0f64, 5.0] {
        let v = 1.0 / r;
        let sv = fracmin::cones::slice_scaled_dbg(&spec, v, &icfg);
        println!("rust S(1/{r}) = {sv:+.8}");
    }
}
