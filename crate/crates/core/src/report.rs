//! Textual reports behind each command-line verb. Reports are plain lines
//! computed from exact data, so equal inputs give byte-identical output.

use crate::error::{Error, Result};
use crate::exact::Subspace;
use crate::ext::{esv_albanese, ext1_tate, formal_jacobian, fw_albanese, LieExtension};
use crate::fhs::{canonical_sequences, hom_fhs, k0_class, parts, special_sequence, FormalHodge};
use crate::functors::{in_image, iota_fhs, shift_down, tau_fhs, twist_fhs, Shift};
use crate::io::{DrRecord, Payload, Report};
use crate::mhs::MixedHodge;
use crate::sharp::{albanese_input, punctured_curve_object, sharp_object};
use crate::vecn::VecTower;

/// A report plus whether the checked property held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub report: Report,
    pub ok: bool,
}

impl Outcome {
    fn pass(verb: &str, lines: Vec<String>) -> Self {
        Outcome {
            report: Report {
                verb: verb.into(),
                lines,
            },
            ok: true,
        }
    }

    pub fn text(&self) -> String {
        let mut s = self.report.lines.join("\n");
        s.push('\n');
        s
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    let s: Vec<String> = xs.iter().map(T::to_string).collect();
    format!("[{}]", s.join(", "))
}

fn dims(subs: &[Subspace]) -> Vec<usize> {
    subs.iter().map(Subspace::dim).collect()
}

/// One-line shape of an object: level, twist, lattice, `H^o`, `V` and `V^o`.
pub fn summary(x: &FormalHodge) -> String {
    let lat = x.h_et.lattice();
    let torsion = if lat.torsion.is_empty() {
        String::new()
    } else {
        format!(" + torsion {}", list(&lat.torsion))
    };
    format!(
        "level {}, twist {}, lattice rank {}{torsion}, H^o dim {}, V dims {}, V^o dims {}",
        x.n,
        x.twist,
        lat.rank,
        x.ho_dim,
        list(x.tower.dims()),
        list(&dims(&x.vo_subspaces()))
    )
}

fn fhs_status(x: &FormalHodge) -> (bool, Vec<String>) {
    let rep = x.validate();
    let mut lines = Vec::new();
    if rep.is_valid() {
        lines.push(format!("valid; special: {}; etale: {}", yes_no(x.is_special()), yes_no(x.is_etale())));
        lines.push(summary(x));
    } else {
        lines.push(format!("invalid: {}", rep.issues.join("; ")));
    }
    lines.extend(rep.notes.iter().map(|n| format!("note: {n}")));
    (rep.is_valid(), lines)
}

fn mhs_status(h: &MixedHodge) -> (bool, Vec<String>) {
    let rep = h.validate();
    if !rep.is_valid() {
        return (false, vec![format!("invalid: {rep}")]);
    }
    let level = h.level_at(0).map_or("none".to_string(), |l| l.to_string());
    (
        true,
        vec![format!(
            "valid; rank {}; weights {}; level at twist 0: {level}",
            h.rank(),
            list(&h.weights_present())
        )],
    )
}

fn tower_status(t: &VecTower) -> (bool, Vec<String>) {
    (true, vec![format!("valid; level {}; dims {}", t.n(), list(t.dims()))])
}

fn lie_status(e: &LieExtension) -> (bool, Vec<String>) {
    let [s, t, q] = e.fingerprints();
    let ok = e.sub_is_injective() && e.is_additive();
    let head = if ok { "valid" } else { "invalid: the vector part meets the lattice" };
    (ok, vec![format!("{head}; sub {s}; total {t}; quotient {q}")])
}

/// The object a de Rham record describes: a punctured curve when it carries
/// a connecting map, otherwise the sharp object at depth `k`.
pub fn dr_object(r: &DrRecord) -> Result<FormalHodge> {
    match r.curve() {
        Some(c) => punctured_curve_object(&c),
        None => sharp_object(&r.h, &r.dr, r.n, r.k()),
    }
}

pub fn validate(p: &Payload) -> Outcome {
    let (ok, lines) = match p {
        Payload::Fhs(x) => fhs_status(x),
        Payload::Mhs(h) => mhs_status(h),
        Payload::Tower(t) => tower_status(t),
        Payload::Lie(e) => lie_status(e),
        Payload::Subspace(s) => (true, vec![format!("valid; dim {} in ambient {}", s.dim(), s.ambient_dim())]),
        Payload::Result(r) => (true, vec![format!("valid; stored report of {} ({} lines)", r.verb, r.lines.len())]),
        Payload::Dr(r) => {
            let issues = r.dr.issues(&r.h);
            if !issues.is_empty() {
                (false, vec![format!("invalid: {}", issues.join("; "))])
            } else {
                match dr_object(r) {
                    Ok(x) => fhs_status(&x),
                    Err(e) => (false, vec![format!("invalid: {e}")]),
                }
            }
        }
    };
    Outcome {
        report: Report {
            verb: "validate".into(),
            lines,
        },
        ok,
    }
}

pub fn decompose(x: &FormalHodge) -> Result<Outcome> {
    x.check()?;
    let p = parts(x)?;
    let mut lines = vec![
        format!("etale part: {}", summary(&p.etale)),
        format!("times part: {}", summary(&p.times)),
        format!("V^o: dims {}", list(p.vo.dims())),
        format!("H^o: dim {}", p.ho_dim),
    ];
    let [a, b] = canonical_sequences(x)?;
    let exact = |s: &crate::fhs::ShortExact| if s.issues().is_empty() { "exact" } else { "NOT exact" };
    lines.push(format!("0 -> (0, V^o) -> X -> X_times -> 0: {}", exact(&a)));
    lines.push(format!("0 -> X_et -> X_times -> (H^o, 0) -> 0: {}", exact(&b)));
    let mut ok = a.issues().is_empty() && b.issues().is_empty();
    match special_sequence(x) {
        Ok(s) => {
            lines.push(format!("0 -> (H^o, V^o) -> X -> X_et -> 0: {}", exact(&s)));
            ok &= s.issues().is_empty() && x.is_special();
        }
        Err(Error::NotSpecial(_)) => {
            lines.push("0 -> (H^o, V^o) -> X -> X_et -> 0: absent (not special)".into());
            ok &= !x.is_special();
        }
        Err(e) => return Err(e),
    }
    Ok(Outcome {
        ok,
        ..Outcome::pass("decompose", lines)
    })
}

pub fn k0(x: &FormalHodge) -> Outcome {
    let c = k0_class(x);
    Outcome::pass("k0", c.to_string().lines().map(String::from).collect())
}

pub fn hom(x: &FormalHodge, y: &FormalHodge) -> Result<Outcome> {
    let h = hom_fhs(x, y)?;
    Ok(Outcome::pass(
        "hom",
        vec![
            format!("Hom fingerprint {}", h.fingerprint()),
            format!("lattice generators {}, vector dim {}", h.generators.len(), h.vector_dim()),
        ],
    ))
}

fn lie_lines(e: &LieExtension) -> Vec<String> {
    let [s, t, q] = e.fingerprints();
    vec![format!("sub {s}"), format!("total {t}"), format!("quotient {q}")]
}

pub fn ext_tate(x: &FormalHodge, p: usize) -> Result<Outcome> {
    Ok(Outcome::pass("ext", lie_lines(&ext1_tate(x, p)?)))
}

pub fn jacobian(x: &FormalHodge, p: usize) -> Result<Outcome> {
    Ok(Outcome::pass("jacobian", lie_lines(&formal_jacobian(x, p)?)))
}

fn certificate(lines: &mut Vec<String>, via: &crate::lie::Fingerprint, direct: &crate::lie::Fingerprint) -> bool {
    let pass = via == direct;
    lines.push(format!(
        "certificate {} (via Ext {via}; direct {direct})",
        if pass { "PASS" } else { "FAIL" }
    ));
    pass
}

/// ESV Albanese of the sharp data `H^{2d-1}` with de Rham depth `d`.
pub fn esv(r: &DrRecord) -> Result<Outcome> {
    let d = r.k();
    if d == 0 || r.n != 2 * d - 1 {
        return Err(Error::Hypothesis(format!("expected n = 2d - 1 for de Rham depth d = {d}, got n = {}", r.n)));
    }
    let x = albanese_input(&r.h, &r.dr, d)?;
    let res = esv_albanese(&x, d)?;
    let mut lines = vec![format!("fingerprint {}", res.group.fingerprint())];
    let ok = certificate(&mut lines, &res.routes.via_ext, &res.routes.direct);
    Ok(Outcome {
        ok,
        ..Outcome::pass("esv", lines)
    })
}

pub fn fw(serre: &LieExtension, z: &Subspace, level_one: Option<&FormalHodge>) -> Result<Outcome> {
    let res = fw_albanese(serre, z.basis(), level_one)?;
    let mut lines = vec![format!("fingerprint {}", res.group.total().fingerprint())];
    lines.extend(lie_lines(&res.group));
    let ok = match &res.routes {
        Some(r) => certificate(&mut lines, &r.via_ext, &r.direct),
        None => true,
    };
    Ok(Outcome {
        ok,
        ..Outcome::pass("fw", lines)
    })
}

/// The sharp object of `r`, at `(n, k)` when given and the recorded
/// values otherwise.
pub fn sharp(r: &DrRecord, n: Option<usize>, k: Option<usize>) -> Result<FormalHodge> {
    match (n, k, r.curve()) {
        (None, None, Some(c)) => punctured_curve_object(&c),
        _ => sharp_object(&r.h, &r.dr, n.unwrap_or(r.n), k.unwrap_or(r.k())),
    }
}

/// Raises by `k` levels, or with `down` checks membership in the image
/// and applies the quasi-inverse.
pub fn shift_level(x: &FormalHodge, kind: Shift, k: usize, down: bool) -> Result<FormalHodge> {
    if down {
        let w = in_image(x, kind, k)?;
        return shift_down(x, &w);
    }
    let (y, _) = match kind {
        Shift::Iota => iota_fhs(x, k)?,
        Shift::Tau => tau_fhs(x, k)?,
    };
    Ok(y)
}

pub fn twist(x: &FormalHodge, k: i64) -> FormalHodge {
    twist_fhs(x, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn curve_reports() {
        let out = esv(&fixtures::nodal_cubic()).unwrap();
        assert!(out.ok);
        assert_eq!(out.report.lines, vec!["fingerprint (vec 0, torus 1, lattice 1)", "certificate PASS (via Ext (vec 0, torus 1, lattice 1); direct (vec 0, torus 1, lattice 1))"]);
        let v = validate(&Payload::Fhs(fixtures::nodal_cubic_fhs().unwrap()));
        assert!(v.ok);
        assert_eq!(v.report.lines[0], "valid; special: yes; etale: yes");
        let d = decompose(&fixtures::generic_level_two()).unwrap();
        assert!(d.ok, "{}", d.text());
        assert!(d.text().contains("absent (not special)"));
    }

    #[test]
    fn reports_repeat_exactly() {
        for (_, p) in fixtures::corpus() {
            assert_eq!(validate(&p), validate(&p));
        }
    }
}
