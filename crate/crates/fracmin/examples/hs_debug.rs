use fracmin::cones::{cone_h, cone_h_halfspace_route, ConeSpec};
use fracmin::quad::QuadConfig;

fn main() {
    let cfg = QuadConfig::with_tol(2e-4, 1e-4);
    for alpha in [0.4, 0.504782, 0.6] {
        let spec = ConeSpec::new(2, 1, 0.5, alpha).unwrap();
        let pv = cone_h(&spec, &cfg).unwrap();
        let hs = cone_h_halfspace_route(&spec, &cfg).unwrap();
        println!("alpha={alpha}: pv={pv:+.6} hs={hs:+.6} ratio={:.6}", pv / hs);
    }
}
