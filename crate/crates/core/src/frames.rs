//! Vertical and horizontal frames on the spheres, with their exact identities.
//!
//! Ambient coordinates are always `x0, ..., x_{d-1}`. Complex coordinates
//! `(x_k, y_k)` live at indices `(2k, 2k+1)`; quaternionic coordinates
//! `(x_k, y_k, z_k, w_k)` at `4k..4k+4`.

use num_traits::{One, Zero};

use crate::algebra::field::{apply_derivation, lie_bracket, PolyVectorField};
use crate::algebra::poly::{int, Poly, Rational, Variables};
use crate::algebra::sphere::reduce_mod_sphere;
use crate::error::{Error, Result};
use crate::linalg::{check_unit, dot, orthonormal_complement};
use crate::report::Check;

/// Tolerance on `|p| - 1` for points handed to frame evaluations.
pub const SPHERE_TOL: f64 = 1e-10;

pub fn ambient_vars(dim: usize) -> Variables {
    Variables::indexed("x", dim)
}

#[derive(Clone, Debug)]
pub struct SphereFrame {
    pub ambient_dim: usize,
    pub vertical: Vec<PolyVectorField>,
    pub horizontal: Option<Vec<PolyVectorField>>,
}

impl SphereFrame {
    pub fn vars(&self) -> &Variables {
        self.vertical[0].vars()
    }

    /// Vertical fields followed by the horizontal ones, when present.
    pub fn all_fields(&self) -> Vec<PolyVectorField> {
        let mut out = self.vertical.clone();
        if let Some(h) = &self.horizontal {
            out.extend(h.iter().cloned());
        }
        out
    }

    pub fn vertical_at(&self, p: &[f64]) -> Vec<Vec<f64>> {
        self.vertical.iter().map(|f| f.eval(p)).collect()
    }

    /// Horizontal basis at `p`: the explicit frame when available, Gram-Schmidt otherwise.
    pub fn horizontal_at(&self, p: &[f64]) -> Vec<Vec<f64>> {
        match &self.horizontal {
            Some(h) => h.iter().map(|f| f.eval(p)).collect(),
            None => {
                let mut against = vec![p.to_vec()];
                against.extend(self.vertical_at(p));
                orthonormal_complement(&against, self.ambient_dim)
            }
        }
    }

    pub fn connection_form(&self) -> ConnectionForm<'_> {
        ConnectionForm { frame: self }
    }
}

/// Evaluates the moments `<v, V^a(p)>` of the vertical fields.
#[derive(Clone, Copy, Debug)]
pub struct ConnectionForm<'a> {
    frame: &'a SphereFrame,
}

impl ConnectionForm<'_> {
    pub fn eval(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        self.frame.vertical_at(p).iter().map(|va| dot(v, va)).collect()
    }

    pub fn rank(&self) -> usize {
        self.frame.vertical.len()
    }
}

/// Reeb field `-y0 d/dx0 + x0 d/dy0 - ... + x_n d/dy_n` on `S^{2n+1}`.
pub fn contact_vertical(n: usize) -> PolyVectorField {
    let d = 2 * n + 2;
    let vars = ambient_vars(d);
    let rows: Vec<Vec<(i64, usize)>> = (0..d)
        .map(|i| if i % 2 == 0 { vec![(-1, i + 1)] } else { vec![(1, i - 1)] })
        .collect();
    let refs: Vec<&[(i64, usize)]> = rows.iter().map(|r| r.as_slice()).collect();
    PolyVectorField::linear(&vars, &refs)
}

pub fn build_contact_frame(n: i64) -> Result<SphereFrame> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("contact sphere needs n >= 1, got {n}")));
    }
    let n = n as usize;
    let vertical = vec![contact_vertical(n)];
    let horizontal = match n {
        1 => {
            let f = s3_frame();
            Some(vec![f.x, f.y])
        }
        3 => Some(s7_fields()[1..].to_vec()),
        _ => None,
    };
    Ok(SphereFrame { ambient_dim: 2 * n + 2, vertical, horizontal })
}

/// Right-multiplication generators `p·i`, `p·j`, `p·k` on `S^{4n+3}`.
pub fn build_quaternionic_frame(n: i64) -> Result<SphereFrame> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("quaternionic sphere needs n >= 0, got {n}")));
    }
    let n = n as usize;
    let d = 4 * n + 4;
    let vars = ambient_vars(d);
    // Per block (x, y, z, w) -> coefficient rows of d/dx, d/dy, d/dz, d/dw.
    let patterns: [[(i64, usize); 4]; 3] = [
        [(-1, 1), (1, 0), (1, 3), (-1, 2)],
        [(-1, 2), (-1, 3), (1, 0), (1, 1)],
        [(-1, 3), (1, 2), (-1, 1), (1, 0)],
    ];
    let vertical = patterns
        .iter()
        .map(|pat| {
            let rows: Vec<Vec<(i64, usize)>> = (0..d)
                .map(|i| {
                    let base = 4 * (i / 4);
                    let (c, j) = pat[i % 4];
                    vec![(c, base + j)]
                })
                .collect();
            let refs: Vec<&[(i64, usize)]> = rows.iter().map(|r| r.as_slice()).collect();
            PolyVectorField::linear(&vars, &refs)
        })
        .collect();
    Ok(SphereFrame { ambient_dim: d, vertical, horizontal: None })
}

/// The global frame on `S^3` from left multiplication by `i, j, k`.
#[derive(Clone, Debug)]
pub struct S3Frame {
    pub v: PolyVectorField,
    pub x: PolyVectorField,
    pub y: PolyVectorField,
}

pub fn s3_frame() -> S3Frame {
    let vars = ambient_vars(4);
    S3Frame {
        v: PolyVectorField::linear(&vars, &[&[(-1, 1)], &[(1, 0)], &[(-1, 3)], &[(1, 2)]]),
        x: PolyVectorField::linear(&vars, &[&[(-1, 2)], &[(1, 3)], &[(1, 0)], &[(-1, 1)]]),
        y: PolyVectorField::linear(&vars, &[&[(-1, 3)], &[(-1, 2)], &[(1, 1)], &[(1, 0)]]),
    }
}

/// Signed permutation rows of the seven octonion-induced fields on `S^7`:
/// entry `(s, j)` in slot `i` means the `d/dx_i` coefficient is `s * x_j`.
const S7_TABLE: [[(i64, usize); 8]; 7] = [
    [(-1, 1), (1, 0), (-1, 3), (1, 2), (-1, 5), (1, 4), (-1, 7), (1, 6)],
    [(-1, 2), (1, 3), (1, 0), (-1, 1), (-1, 6), (1, 7), (1, 4), (-1, 5)],
    [(-1, 3), (-1, 2), (1, 1), (1, 0), (1, 7), (1, 6), (-1, 5), (-1, 4)],
    [(-1, 4), (1, 5), (1, 6), (-1, 7), (1, 0), (-1, 1), (-1, 2), (1, 3)],
    [(-1, 5), (-1, 4), (-1, 7), (-1, 6), (1, 1), (1, 0), (1, 3), (1, 2)],
    [(-1, 6), (1, 7), (-1, 4), (1, 5), (1, 2), (-1, 3), (1, 0), (-1, 1)],
    [(-1, 7), (-1, 6), (1, 5), (1, 4), (-1, 3), (-1, 2), (1, 1), (1, 0)],
];

/// `X_1, ..., X_7` on `S^7` (index 0 holds `X_1`).
pub fn s7_fields() -> Vec<PolyVectorField> {
    let vars = ambient_vars(8);
    S7_TABLE
        .iter()
        .map(|row| {
            let rows: Vec<[(i64, usize); 1]> = row.iter().map(|&t| [t]).collect();
            let refs: Vec<&[(i64, usize)]> = rows.iter().map(|r| r.as_slice()).collect();
            PolyVectorField::linear(&vars, &refs)
        })
        .collect()
}

/// `X_1` vertical, `X_2..X_7` horizontal.
pub fn build_s7_frame() -> SphereFrame {
    let f = s7_fields();
    SphereFrame { ambient_dim: 8, vertical: vec![f[0].clone()], horizontal: Some(f[1..].to_vec()) }
}

/// Moments `<v, V^a(p)>`; for `S^{2n+1}` this is the contact form `ω(v)`.
pub fn contact_form_eval(frame: &SphereFrame, p: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    for x in [p, v] {
        if x.len() != frame.ambient_dim {
            return Err(Error::DimensionMismatch { expected: frame.ambient_dim, found: x.len() });
        }
    }
    check_unit(p, SPHERE_TOL)?;
    Ok(frame.connection_form().eval(p, v))
}

/// Exact Gram polynomials `<F_a, F_b>` of a field list.
pub fn gram_polys(fields: &[PolyVectorField]) -> Result<Vec<Vec<Poly>>> {
    fields
        .iter()
        .map(|a| fields.iter().map(|b| a.dot(b)).collect())
        .collect()
}

/// True when `<F_a, F_b> = δ_ab r^2` exactly.
pub fn gram_is_radial_identity(fields: &[PolyVectorField]) -> Result<bool> {
    let r2 = Poly::radius_squared(fields[0].vars());
    let g = gram_polys(fields)?;
    Ok(g.iter().enumerate().all(|(a, row)| {
        row.iter().enumerate().all(|(b, e)| if a == b { e == &r2 } else { e.is_zero() })
    }))
}

pub fn is_tangent(field: &PolyVectorField) -> bool {
    apply_derivation(field, &Poly::radius_squared(field.vars()))
        .map(|p| p.is_zero())
        .unwrap_or(false)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InertiaReport {
    pub points_checked: usize,
    /// `max_q max_ab |I_q(a, b) - δ_ab|`
    pub max_deviation: f64,
}

/// Evaluates the inertia tensor `I_q(ξ_a, ξ_b) = <V^a(q), V^b(q)>` at each sample point.
pub fn verify_inertia_constancy(frame: &SphereFrame, sample_points: &[Vec<f64>]) -> Result<InertiaReport> {
    let gram = gram_polys(&frame.vertical)?;
    let mut max_dev: f64 = 0.0;
    for q in sample_points {
        check_unit(q, SPHERE_TOL)?;
        for (a, row) in gram.iter().enumerate() {
            for (b, g) in row.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                max_dev = max_dev.max((g.eval_f64(q) - want).abs());
            }
        }
    }
    Ok(InertiaReport { points_checked: sample_points.len(), max_deviation: max_dev })
}

/// `[A, B] == c * C` exactly.
pub fn bracket_equals(a: &PolyVectorField, b: &PolyVectorField, c: i64, target: &PolyVectorField) -> Result<bool> {
    Ok(lie_bracket(a, b)? == target.scale(&int(c)))
}

/// `<X_b, [X_a, X_b]>` vanishes mod the sphere for `a = 2..7`, `b = 1..7`.
pub fn s7_bracket_orthogonality() -> Result<Vec<((usize, usize), bool)>> {
    let f = s7_fields();
    let mut out = Vec::new();
    for a in 1..7 {
        for b in 0..7 {
            let br = lie_bracket(&f[a], &f[b])?;
            let ip = f[b].dot(&br)?;
            out.push(((a + 1, b + 1), reduce_mod_sphere(&ip).is_zero()));
        }
    }
    Ok(out)
}

fn identity_matrix_dev(n: usize) -> impl Fn(&[Vec<Rational>]) -> bool {
    move |m: &[Vec<Rational>]| {
        (0..n).all(|i| (0..n).all(|j| if i == j { m[i][j].is_one() } else { m[i][j].is_zero() }))
    }
}

/// Exact identities of the frame constructions.
pub fn checks() -> Vec<Check> {
    const M: &str = "frames";
    let mut out = Vec::new();

    for n in 1..=3 {
        let f = build_contact_frame(n).expect("n >= 1");
        let v = &f.vertical[0];
        out.push(Check::exact(M, "contact Reeb field", format!("V_{}(r^2) = 0 on S^{}", n + 1, 2 * n + 1), is_tangent(v), ""));
        let ok = v.dot(v).map(|g| g == Poly::radius_squared(v.vars())).unwrap_or(false);
        out.push(Check::exact(M, "contact Reeb field", format!("<V_{0},V_{0}> = r^2 on S^{1}", n + 1, 2 * n + 1), ok, ""));
    }

    for n in 0..=2 {
        let f = build_quaternionic_frame(n).expect("n >= 0");
        let [v1, v2, v3] = [&f.vertical[0], &f.vertical[1], &f.vertical[2]];
        let s = 4 * n + 3;
        let loc = "quaternionic vertical fields: commutators";
        out.push(Check::exact(M, loc, format!("[V1,V2] = 2V3 on S^{s}"), bracket_equals(v1, v2, 2, v3).unwrap_or(false), ""));
        out.push(Check::exact(M, loc, format!("[V2,V3] = 2V1 on S^{s}"), bracket_equals(v2, v3, 2, v1).unwrap_or(false), ""));
        out.push(Check::exact(M, loc, format!("[V1,V3] = -2V2 on S^{s}"), bracket_equals(v1, v3, -2, v2).unwrap_or(false), ""));
        let tangent = f.vertical.iter().all(is_tangent);
        out.push(Check::exact(M, "quaternionic vertical fields", format!("V^a(r^2) = 0 on S^{s}"), tangent, ""));
        let gram = gram_is_radial_identity(&f.vertical).unwrap_or(false);
        out.push(Check::exact(M, "quaternionic inertia tensor", format!("<V^a,V^b> = δ_ab r^2 on S^{s}"), gram, ""));
    }

    let s3 = s3_frame();
    let s3_fields = [s3.v.clone(), s3.x.clone(), s3.y.clone()];
    out.push(Check::exact(M, "S^3 global frame", "V, X, Y tangent", s3_fields.iter().all(is_tangent), ""));
    out.push(Check::exact(
        M,
        "S^3 global frame",
        "<F_a,F_b> = δ_ab r^2 for F in {V,X,Y}",
        gram_is_radial_identity(&s3_fields).unwrap_or(false),
        "",
    ));
    out.push(Check::exact(M, "S^3 global frame", "V = V_2", s3.v == contact_vertical(1), ""));

    let s7 = s7_fields();
    out.push(Check::exact(M, "S^7 octonion frame", "X_a(r^2) = 0, a = 1..7", s7.iter().all(is_tangent), ""));
    out.push(Check::exact(
        M,
        "S^7 octonion frame",
        "<X_a,X_b> = δ_ab r^2 (28 entries)",
        gram_is_radial_identity(&s7).unwrap_or(false),
        "",
    ));
    out.push(Check::exact(
        M,
        "S^7 octonion frame",
        "<X_a(x), x> = 0, a = 1..7",
        s7.iter().all(|f| f.radial().is_zero()),
        "",
    ));
    out.push(Check::exact(M, "S^7 octonion frame", "X_1 = V_4", s7[0] == contact_vertical(3), ""));
    let orth = s7_bracket_orthogonality().unwrap_or_default();
    let bad: Vec<String> = orth.iter().filter(|(_, ok)| !ok).map(|((a, b), _)| format!("({a},{b})")).collect();
    out.push(Check::exact(
        M,
        "S^7 sub-Laplacian divergence terms",
        "<X_b,[X_a,X_b]> = 0, a = 2..7, b = 1..7",
        orth.len() == 42 && bad.is_empty(),
        if bad.is_empty() { String::new() } else { format!("nonzero at {}", bad.join(" ")) },
    ));

    // Inertia tensors as exact polynomial identities evaluated on the sphere.
    let check_unit_gram = identity_matrix_dev(3);
    let qf = build_quaternionic_frame(1).expect("n = 1");
    let p = [int(1), int(0), int(0), int(0), int(0), int(0), int(0), int(0)];
    let g: Vec<Vec<Rational>> = gram_polys(&qf.vertical)
        .expect("same vars")
        .iter()
        .map(|row| row.iter().map(|e| e.eval_rational(&p)).collect())
        .collect();
    out.push(Check::exact(M, "quaternionic inertia tensor", "I_q = Id_3 at q = e_0 on S^7", check_unit_gram(&g), ""));
    out
}
