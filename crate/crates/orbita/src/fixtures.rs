//! Golden fixtures: the worked symbolic objects the engine must reproduce
//! byte for byte. Each fixture is regenerated from the engine and compared
//! against the checked-in rendering; the generation path and the displayed
//! factored forms are independent computation routes.

use orbita_core::induced::{cocycle, generators, s_matrix, GeneratorMeasure, SMatrix, SpacePoint};
use orbita_core::orbit::coadjoint;
use orbita_core::symbolic::{RatFun, VarId};
use orbita_core::unimat::{
    corner_antidiagonal, DenseMatrix, Functional, MatrixFile, UnipotentMatrix, Window,
};
use orbita_core::gauss;

fn rf(v: VarId) -> RatFun {
    RatFun::var(v)
}

/// Generic symbolic point and corner-anti-diagonal functional on a split
/// window.
fn symbolic_setup(window: Window, m: i32) -> (SpacePoint<RatFun>, Functional<RatFun>) {
    let x = SpacePoint::<RatFun>::generic(window, m);
    let mut y = Functional::zero(window);
    for (k, r) in corner_antidiagonal(window, m) {
        y.set(k, r, rf(VarId::y(k, r))).unwrap();
    }
    (x, y)
}

fn render_smatrix(s: &SMatrix<RatFun>) -> String {
    let mut out = String::new();
    for (&(k, r), v) in s.entries() {
        out.push_str(&format!("S[{},{}] = {}\n", k, r, v));
    }
    out
}

/// 𝕊 for the split window, cross-checked against the transposed product
/// (x^(m))ᵀ · yᵀ · (x_m⁻¹)ᵀ before rendering.
fn s_fixture(window: Window, m: i32) -> String {
    let (x, y) = symbolic_setup(window, m);
    let s = s_matrix(&x, &y).unwrap();

    // independent route: transpose the three factors and multiply
    let rows_up: Vec<i32> = (window.lo..=m).collect();
    let rows_low: Vec<i32> = (m + 1..=window.hi).collect();
    let up_t = block_transpose(&x.up, &rows_up);
    let low_inv_t = block_transpose(&x.low.invert(), &rows_low);
    let mut y_t = DenseMatrix::<RatFun>::zero(rows_up.clone(), rows_low.clone());
    for (&(k, r), v) in y.entries() {
        y_t.set(r, k, v.clone()).unwrap();
    }
    let product = up_t.mul(&y_t).unwrap().mul(&low_inv_t).unwrap();
    for &k in &rows_up {
        for &r in &rows_low {
            assert_eq!(
                s.get(k, r),
                product.get(k, r).clone(),
                "transposed-product route disagrees at ({k},{r})"
            );
        }
    }
    render_smatrix(&s)
}

fn block_transpose(u: &UnipotentMatrix<RatFun>, labels: &[i32]) -> DenseMatrix<RatFun> {
    let mut d = DenseMatrix::zero(labels.to_vec(), labels.to_vec());
    for &k in labels {
        for &r in labels {
            let v = u.get(k, r);
            if !num_traits::Zero::is_zero(&v) {
                d.set(r, k, v).unwrap();
            }
        }
    }
    d
}

/// Gauss factors of 𝕊·J on the B(4) window: the factored display.
fn s_factored_b4() -> String {
    let window = Window::centered(3, 1);
    let (x, y) = symbolic_setup(window, 3);
    let s = s_matrix(&x, &y).unwrap();
    let c = s.to_dense().mul_j_right(3).unwrap();
    let f = gauss::ldu(&c).unwrap();
    let mut out = String::new();
    out.push_str("L:\n");
    for (&(k, r), v) in f.l.entries() {
        out.push_str(&format!("{} {} {}\n", k, r, v));
    }
    out.push_str("D:\n");
    for (i, v) in &f.d {
        out.push_str(&format!("{} {}\n", i, v));
    }
    out.push_str("U:\n");
    for (&(k, r), v) in f.u.entries() {
        out.push_str(&format!("{} {} {}\n", k, r, v));
    }
    assert_eq!(f.reassemble(), c);
    out
}

/// Coadjoint action on the Heisenberg window, as a functional file.
fn heisenberg_coadjoint() -> String {
    let w = Window::size(3);
    let mut t = UnipotentMatrix::upper(w);
    for (k, r) in w.upper_pairs() {
        t.set(k, r, rf(VarId::t(k, r))).unwrap();
    }
    let mut y = Functional::zero(w);
    for k in w.indices() {
        for r in w.indices() {
            if k > r {
                y.set(k, r, rf(VarId::y(k, r))).unwrap();
            }
        }
    }
    let moved = coadjoint(&t, &y).unwrap();
    orbita_core::unimat::write_matrix(&MatrixFile::Functional(moved))
}

/// The induced representation on the Heisenberg window, split at m = 2
/// with y = y31·E31: character exponent and coordinate shift.
fn heisenberg_induced() -> String {
    let w = Window::size(3);
    let mut up = UnipotentMatrix::upper(w);
    up.set(1, 2, rf(VarId::x(1, 2))).unwrap();
    let x = SpacePoint::new(UnipotentMatrix::upper(w), up, 2).unwrap();
    let mut y = Functional::zero(w);
    y.set(3, 1, rf(VarId::y(3, 1))).unwrap();
    let mut t = UnipotentMatrix::upper(w);
    for (k, r) in w.upper_pairs() {
        t.set(k, r, rf(VarId::t(k, r))).unwrap();
    }
    let c = cocycle(&x, &t).unwrap();
    let exponent = orbita_core::induced::pair_with_functional(&y, &c.h).unwrap();
    let exponent = RatFun::new(exponent.num().mul_tau(1), exponent.den().clone()).unwrap();
    let mut out = String::new();
    out.push_str(&format!("exponent = {}\n", exponent));
    out.push_str(&format!("shift x[1,2] -> {}\n", c.moved.up.get(1, 2)));
    out
}

/// Generator table of the split window in the rendered operator grammar.
fn generator_fixture(window: Window, m: i32) -> String {
    let (_, y) = symbolic_setup(window, m);
    let gens = generators(window, m, &y, GeneratorMeasure::Haar).unwrap();
    let mut out = String::new();
    for ((k, r), op) in &gens {
        out.push_str(&format!("A[{},{}] = {}\n", k, r, op));
    }
    out
}

/// All golden fixtures: (name, regenerated content).
pub fn regenerate_all() -> Vec<(&'static str, String)> {
    vec![
        ("heisenberg_coadjoint.txt", heisenberg_coadjoint()),
        ("heisenberg_induced.txt", heisenberg_induced()),
        ("s_matrix_b4.txt", s_fixture(Window::centered(3, 1), 3)),
        ("s_matrix_b5.txt", s_fixture(Window::size(5), 3)),
        ("s_matrix_b6.txt", s_fixture(Window::centered(3, 2), 3)),
        ("s_matrix_b8.txt", s_fixture(Window::centered(3, 3), 3)),
        ("s_factored_b4.txt", s_factored_b4()),
        ("generators_b5.txt", generator_fixture(Window::size(5), 3)),
        ("generators_b6.txt", generator_fixture(Window::centered(3, 2), 3)),
    ]
}

/// The checked-in golden renderings.
pub fn golden(name: &str) -> Option<&'static str> {
    match name {
        "heisenberg_coadjoint.txt" => Some(include_str!("../fixtures/heisenberg_coadjoint.txt")),
        "heisenberg_induced.txt" => Some(include_str!("../fixtures/heisenberg_induced.txt")),
        "s_matrix_b4.txt" => Some(include_str!("../fixtures/s_matrix_b4.txt")),
        "s_matrix_b5.txt" => Some(include_str!("../fixtures/s_matrix_b5.txt")),
        "s_matrix_b6.txt" => Some(include_str!("../fixtures/s_matrix_b6.txt")),
        "s_matrix_b8.txt" => Some(include_str!("../fixtures/s_matrix_b8.txt")),
        "s_factored_b4.txt" => Some(include_str!("../fixtures/s_factored_b4.txt")),
        "generators_b5.txt" => Some(include_str!("../fixtures/generators_b5.txt")),
        "generators_b6.txt" => Some(include_str!("../fixtures/generators_b6.txt")),
        _ => None,
    }
}
