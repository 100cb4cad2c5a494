//! Extreme rays of the standard solution cone of the pillow, and of a small
//! hand-written system.

use normsurf::cone::{extreme_rays, filter_admissible, is_extreme_ray, ConeSystem};
use normsurf::gadgets::triangular_pillow;
use normsurf::normal::matching_system;
use normsurf::EulerFunctional;

fn main() {
    let tri = triangular_pillow();
    let sys = ConeSystem::from_matching(&matching_system(&tri));
    let rays = extreme_rays(&sys);
    let admissible = filter_admissible(&rays, &sys.quad_blocks);
    let chi = EulerFunctional::new(&tri);
    println!("pillow cone: dim {}, {} equations, {} extreme rays, {} admissible", sys.dim, sys.rows.len(), rays.len(), admissible.len());
    for r in &admissible {
        let v: Vec<i64> = r.to_i64().expect("small entries");
        let x = normsurf::NormalVector::from_coords(v.clone());
        println!("  {v:?}  chi={}  vertex={}", chi.value(&x), is_extreme_ray(&sys, r).unwrap());
    }

    // x0 + x1 = x2 over four coordinates.
    let small = ConeSystem::new(4).with_dense_row(&[1, 1, -1, 0]);
    for r in extreme_rays(&small) {
        println!("small: {:?}", r.to_i64().unwrap());
    }
}
