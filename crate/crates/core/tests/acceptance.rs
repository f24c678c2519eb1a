//! Acceptance run: one PASS/FAIL line per criterion, with timings.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! The process fails when any criterion fails, except for the documented
//! `iota = tau` sub-claim of criterion 8, which is reported red with
//! counts and only fails the run if it breaks in an unexpected way.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fhs_core::exact::{GMatrix, IntMatrix};
use fhs_core::ext::{build_ext_middle, forgetful_class, same_mhs_class};
use fhs_core::fhs::{
    canonical_sequences, exactness_issues, hom_fhs, image_coimage, k0_class, ker_coker_fhs, special_sequence, morphism_over,
    FhsMorphism, FormalHodge,
};
use fhs_core::functors::{in_image, iota_fhs, round_trip_iso, shift_down, tau_fhs, Shift};
use fhs_core::io::{parse, print, Payload};
use fhs_core::lie::Fingerprint;
use fhs_core::mhs::{ext1_mhs, jp, MixedHodge};
use fhs_core::random::{FhsShape, Gen};
use fhs_core::report;
use fhs_core::sharp::{comparison_to_mhs, sharp_object, DeRhamTower};
use fhs_core::vecn::{ext1_vec2_from_hom, snake_boundary, TowerMorphism, VecTower};
use fhs_core::{fixtures, Error};

#[derive(PartialEq)]
enum Status {
    Pass,
    Fail,
    /// Red because of the documented conflict, and only because of it.
    KnownConflict,
}

struct Verdict {
    status: Status,
    detail: String,
}

impl Verdict {
    fn check(ok: bool, detail: String) -> Self {
        Verdict {
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        }
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn load(name: &str) -> Payload {
    let text = std::fs::read_to_string(data(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    parse(&text).unwrap_or_else(|e| panic!("{name}: {e}")).payload
}

fn esv_fixture(name: &str, want: Fingerprint) -> Verdict {
    let Payload::Dr(r) = load(name) else {
        return Verdict::check(false, format!("{name} is not a dr document"));
    };
    match report::esv(&r) {
        Ok(out) => {
            let line = out.report.lines.join("; ");
            let ok = out.ok && out.report.lines[0] == format!("fingerprint {want}");
            Verdict::check(ok, format!("{name}: {line}"))
        }
        Err(e) => Verdict::check(false, format!("{name}: {e}")),
    }
}

fn criterion_3() -> Verdict {
    let e = fixtures::elliptic_i();
    let a = jp(&e, 1).map(|g| g.fingerprint());
    let b = ext1_mhs(&MixedHodge::tate(-1), &e).map(|g| g.fingerprint());
    match (a, b) {
        (Ok(a), Ok(b)) => Verdict::check(
            a == b && a == Fingerprint::new(0, 1, 2) && a.torsion.is_empty(),
            format!("jp(E_i, 1) = {a}, Ext^1(Z(-1), E_i) = {b}"),
        ),
        (a, b) => Verdict::check(false, format!("{a:?} / {b:?}")),
    }
}

/// `u` with `incl . u = g`, computed without reference to how `g` was made.
fn factor_through_mono(incl: &FhsMorphism, g: &FhsMorphism) -> Option<FhsMorphism> {
    let f_et = incl.target.h_et.lattice().solve(&incl.f_et, &g.f_et)?;
    let f_o = incl.f_o.solve(&g.f_o)?;
    let phi = incl.phi.iter().zip(&g.phi).map(|(i, gk)| i.solve(gk)).collect::<Option<Vec<_>>>()?;
    let u = FhsMorphism::new(g.source.clone(), incl.source.clone(), f_et, f_o, phi).ok()?;
    Some(FhsMorphism {
        f_et: incl.source.h_et.lattice().normalize(&u.f_et),
        ..u
    })
}

/// `u` with `u . proj = g`.
fn factor_through_epi(proj: &FhsMorphism, g: &FhsMorphism) -> Option<FhsMorphism> {
    let c = proj.target.h_et.lattice();
    let lift = c.solve(&proj.f_et, &IntMatrix::identity(c.ngens()))?;
    let f_et = g.target.h_et.lattice().normalize(&(&g.f_et * &lift));
    let f_o = &g.f_o * &proj.f_o.right_inverse()?;
    let phi = proj
        .phi
        .iter()
        .zip(&g.phi)
        .map(|(p, gk)| Some(gk * &p.right_inverse()?))
        .collect::<Option<Vec<_>>>()?;
    FhsMorphism::new(proj.target.clone(), g.target.clone(), f_et, f_o, phi).ok()
}

fn is_zero_object(x: &FormalHodge) -> bool {
    x.h_et.lattice().is_trivial() && x.ho_dim == 0 && x.tower.is_zero()
}

/// Why the abelian-category checks fail for `f` (empty on success).
fn abelian_issues(g: &mut Gen, f: &FhsMorphism, shape: &FhsShape) -> Vec<&'static str> {
    let mut out = Vec::new();
    let Ok(kc) = ker_coker_fhs(f) else {
        return vec!["kernel/cokernel failed"];
    };
    if !f.compose(&kc.incl).is_zero() || !kc.proj.compose(f).is_zero() {
        out.push("composites with ker/coker are not zero");
    }
    match (ker_coker_fhs(&kc.incl), ker_coker_fhs(&kc.proj)) {
        (Ok(a), Ok(b)) if is_zero_object(a.ker()) && is_zero_object(b.coker()) => {}
        _ => out.push("kernel map not mono or cokernel map not epi"),
    }
    // universal properties: a map killed by f factors uniquely through ker
    let t = g.fhs(&FhsShape { max_rank: 1, ..shape.clone() });
    let h = g.morphism(&t, kc.ker());
    let through = kc.incl.compose(&h);
    if !factor_through_mono(&kc.incl, &through).is_some_and(|u| u.same_as(&h)) {
        out.push("kernel universal property");
    }
    let h = g.morphism(kc.coker(), &t);
    let through = h.compose(&kc.proj);
    if !factor_through_epi(&kc.proj, &through).is_some_and(|u| u.same_as(&h)) {
        out.push("cokernel universal property");
    }
    match image_coimage(f) {
        Ok(fac) => {
            if !fac.u.is_iso() || !fac.incl_im.compose(&fac.u.compose(&fac.proj_coim)).same_as(f) {
                out.push("image != coimage");
            }
            // 0 -> ker -> X -> coim -> 0 and 0 -> im -> Y -> coker -> 0 under both forgetful functors
            let left = exactness_issues(&kc.incl, &fac.proj_coim);
            let right = exactness_issues(&fac.incl_im, &kc.proj);
            if !left.is_empty() || !right.is_empty() {
                out.push("induced sequences not exact");
            }
        }
        Err(_) => out.push("image/coimage failed"),
    }
    out
}

fn criterion_4() -> Verdict {
    let mut failures = Vec::new();
    let mut nontrivial = 0;
    for case in 0..200u64 {
        let mut g = Gen::new(4000 + case);
        let shape = FhsShape {
            torsion: true,
            ..FhsShape::small(1 + (case % 3) as usize)
        };
        let f = g.interesting_morphism(&shape);
        if !f.is_zero() && !f.is_iso() {
            nontrivial += 1;
        }
        let issues = abelian_issues(&mut g, &f, &shape);
        if !issues.is_empty() {
            failures.push(format!("case {case}: {}", issues.join(", ")));
        }
    }
    Verdict::check(
        failures.is_empty(),
        format!("200 morphisms ({nontrivial} neither zero nor iso), {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()),
    )
}

/// Criteria 5 and 6 share the same 100 objects.
fn criteria_5_6() -> (Verdict, Verdict) {
    let (mut bad5, mut bad6, mut special, mut sequences) = (Vec::new(), Vec::new(), 0, 0);
    for case in 0..100u64 {
        let mut g = Gen::new(5000 + case);
        let x = g.fhs(&FhsShape {
            torsion: true,
            max_ho: 2,
            ..FhsShape::small(1 + (case % 3) as usize)
        });
        let mut seqs = Vec::new();
        match canonical_sequences(&x) {
            Ok([a, b]) if a.issues().is_empty() && b.issues().is_empty() => seqs.extend([a, b]),
            _ => bad5.push(format!("case {case}: canonical sequences")),
        }
        match (special_sequence(&x), x.is_special()) {
            (Ok(s), true) if s.issues().is_empty() => {
                special += 1;
                seqs.push(s);
            }
            (Err(Error::NotSpecial(_)), false) => {}
            _ => bad5.push(format!("case {case}: third sequence vs is_special")),
        }
        for s in &seqs {
            sequences += 1;
            let (a, m, c) = (k0_class(s.sub()), k0_class(s.middle()), k0_class(s.quot()));
            if a.add(&c) != m {
                bad6.push(format!("case {case}: additivity"));
            }
            if ![a, m, c].iter().all(|k| k.is_symmetric()) {
                bad6.push(format!("case {case}: symmetry"));
            }
        }
    }
    (
        Verdict::check(
            bad5.is_empty(),
            format!("100 objects, {special} special, {} failures {:?}", bad5.len(), bad5.iter().take(3).collect::<Vec<_>>()),
        ),
        Verdict::check(
            bad6.is_empty(),
            format!("{sequences} sequences, {} failures {:?}", bad6.len(), bad6.iter().take(3).collect::<Vec<_>>()),
        ),
    )
}

/// Conjugates the middle of `0 -> V' -> E -> V -> 0` by a random automorphism
/// so the boundary is computed on a basis the construction never saw.
fn scramble_middle(g: &mut Gen, i: &TowerMorphism, p: &TowerMorphism) -> (TowerMorphism, TowerMorphism) {
    let e = &i.target;
    let a: Vec<GMatrix> = e.dims().iter().map(|&d| g.invertible(d)).collect();
    let ai: Vec<GMatrix> = a.iter().map(|m| m.inverse().expect("invertible")).collect();
    let mid = VecTower::new(e.dims().to_vec(), vec![&(&a[0] * e.v(2)) * &ai[1]]).expect("same shapes");
    let i2 = TowerMorphism::new(i.source.clone(), mid.clone(), vec![&a[0] * i.f(1), &a[1] * i.f(2)]).expect("commutes");
    let p2 = TowerMorphism::new(mid, p.target.clone(), vec![p.f(1) * &ai[0], p.f(2) * &ai[1]]).expect("commutes");
    (i2, p2)
}

/// A level-2 tower whose map has rank at most one, so that both its kernel
/// and its cokernel are usually non-zero.
fn thin_tower(g: &mut Gen) -> VecTower {
    let (d1, d2) = (g.usize(1, 3), g.usize(1, 3));
    let map = if g.coin() { &g.matrix(d1, 1) * &g.matrix(1, d2) } else { GMatrix::zeros(d1, d2) };
    VecTower::new(vec![d1, d2], vec![map]).expect("shapes match")
}

fn criterion_7() -> Verdict {
    let mut failures = 0;
    let mut nonzero = 0;
    for case in 0..100u64 {
        let mut g = Gen::new(7000 + case);
        let (v, w) = (thin_tower(&mut g), thin_tower(&mut g));
        let shape = fhs_core::vecn::boundary_shape(&v, &w);
        let phi = g.matrix(shape.0, shape.1);
        if !phi.is_zero() {
            nonzero += 1;
        }
        let ok = ext1_vec2_from_hom(&v, &w, &phi)
            .map(|(i, p)| scramble_middle(&mut g, &i, &p))
            .and_then(|(i, p)| snake_boundary(&i, &p))
            .is_ok_and(|b| b == phi);
        if !ok {
            failures += 1;
        }
    }
    Verdict::check(failures == 0, format!("100 triples ({nonzero} with phi != 0), {failures} failures"))
}

/// `up(down(y)) ~ y` for an object accepted by `in_image`. The morphisms
/// over the identity lattice map form an affine space (a particular
/// solution plus the `f_et = 0` morphisms); a generic point of it is an
/// isomorphism whenever some point is.
fn re_raises(g: &mut Gen, y: &FormalHodge, kind: Shift, k: usize) -> bool {
    let Ok(w) = in_image(y, kind, k) else { return false };
    let Ok(x) = shift_down(y, &w) else { return false };
    let up = match kind {
        Shift::Iota => iota_fhs(&x, k),
        Shift::Tau => tau_fhs(&x, k),
    };
    let Ok((z, _)) = up else { return false };
    let id = IntMatrix::identity(y.h_et.lattice().ngens());
    let (Ok(base), Ok(hom)) = (morphism_over(&z, y, &id), hom_fhs(&z, y)) else {
        return false;
    };
    (0..3).any(|_| {
        let scalars: Vec<_> = hom.vector_basis.iter().map(|_| g.scalar()).collect();
        base.add(&hom.combine(&[], &scalars)).is_iso()
    })
}

fn criterion_8() -> Verdict {
    let mut bad = Vec::new();
    let (mut trips, mut accepted, mut agree_zero_fn, mut disagree) = (0, 0, 0, 0);
    let (mut disagree_zero_fn, mut agree_nonzero_fn, mut random_acc, mut random_rej) = (0, 0, 0, 0);
    for case in 0..100u64 {
        let mut g = Gen::new(8000 + case);
        let n = 1 + (case % 2) as usize;
        let k = 1 + (case / 2 % 2) as usize;
        let special = case % 3 != 0;
        let x = g.fhs(&FhsShape {
            special: Some(special),
            ..FhsShape::small(n)
        });
        let mut kinds = vec![Shift::Iota];
        if x.is_special() {
            kinds.push(Shift::Tau);
        }
        for kind in kinds {
            trips += 1;
            if !round_trip_iso(&x, kind, k).is_ok_and(|f| f.is_iso()) {
                bad.push(format!("case {case}: {kind:?} round trip"));
            }
            let raised = match kind {
                Shift::Iota => iota_fhs(&x, k),
                Shift::Tau => tau_fhs(&x, k),
            };
            match raised {
                Ok((y, _)) if in_image(&y, kind, k).is_ok() => {
                    accepted += 1;
                    if !re_raises(&mut g, &y, kind, k) {
                        bad.push(format!("case {case}: {kind:?} image not re-raised"));
                    }
                }
                _ => bad.push(format!("case {case}: {kind:?} output rejected")),
            }
        }
        // an arbitrary object of the higher level is accepted only if it really is an image
        let y = g.fhs(&FhsShape::small(n + k));
        for kind in [Shift::Iota, Shift::Tau] {
            match in_image(&y, kind, k) {
                Ok(_) => {
                    random_acc += 1;
                    if !re_raises(&mut g, &y, kind, k) {
                        bad.push(format!("case {case}: {kind:?} accepted a non-image"));
                    }
                }
                Err(Error::ImageCondition { .. }) | Err(Error::NotSpecial(_)) => random_rej += 1,
                Err(e) => bad.push(format!("case {case}: {kind:?} unexpected error {e}")),
            }
        }
        if x.ho_dim == 0 && x.is_special() {
            let fn_zero = x.f_sub(n).dim() == 0;
            let same = match (iota_fhs(&x, k), tau_fhs(&x, k)) {
                (Ok((a, _)), Ok((b, _))) => a == b,
                _ => false,
            };
            match (same, fn_zero) {
                (true, true) => agree_zero_fn += 1,
                (false, false) => disagree += 1,
                (false, true) => disagree_zero_fn += 1,
                (true, false) => agree_nonzero_fn += 1,
            }
        }
    }
    let detail = format!(
        "{trips} round trips, {accepted} constructed outputs accepted, random higher-level objects {random_acc} accepted / {random_rej} rejected, \
         {} failures {:?}; iota = tau on H^o = 0: {agree_zero_fn} agree with F^n = 0, {agree_nonzero_fn} agree with F^n != 0, \
         {disagree} differ with F^n != 0 (iota adds F^n to H^o), {disagree_zero_fn} differ with F^n = 0",
        bad.len(),
        bad.iter().take(3).collect::<Vec<_>>()
    );
    let status = if !bad.is_empty() || disagree_zero_fn > 0 {
        Status::Fail
    } else if disagree > 0 {
        Status::KnownConflict
    } else {
        Status::Pass
    };
    Verdict { status, detail }
}

fn criterion_9() -> Verdict {
    let mut failures = Vec::new();
    let mut nonsplit = 0;
    for case in 0..50u64 {
        let mut g = Gen::new(9000 + case);
        let shape = FhsShape::small(1 + (case % 3) as usize);
        let (x, y) = (g.fhs(&shape), g.fhs(&shape));
        let cls = g.ext_class(&x, &y);
        if !cls.theta_mhs.is_zero() {
            nonsplit += 1;
        }
        let ok = build_ext_middle(&x, &y, &cls).is_ok_and(|s| {
            s.middle().validate().is_valid()
                && s.issues().is_empty()
                && forgetful_class(&s).is_some_and(|t| same_mhs_class(&x, &y, &t, &cls.theta_mhs).unwrap_or(false))
        });
        if !ok {
            failures.push(case);
        }
    }
    Verdict::check(
        failures.is_empty(),
        format!("50 pairs ({nonsplit} with theta != 0), failures {failures:?}"),
    )
}

fn criterion_10() -> Verdict {
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 1..=3usize {
        for k in 1..=n {
            for rep in 0..4u64 {
                let mut g = Gen::new(10_000 + 100 * n as u64 + 10 * k as u64 + rep);
                let weight = g.int(0, 2 * n as i64 - 1);
                let h = g.pure(weight, n, 3);
                if !h.in_level(n, 0) {
                    continue;
                }
                cases += 1;
                let ok = DeRhamTower::canonical(&h, k)
                    .and_then(|dr| sharp_object(&h, &dr, n, k))
                    .is_ok_and(|x| {
                        let embedded = FormalHodge::embed_mhs(&h, n, 0).expect("level checked");
                        x.validate().is_valid()
                            && x.tower.dims() == embedded.tower.dims()
                            && comparison_to_mhs(&x).is_ok_and(|f| f.is_iso() && f.target == embedded)
                    });
                if !ok {
                    failures.push((n, k, weight));
                }
            }
        }
    }
    Verdict::check(failures.is_empty(), format!("{cases} pure structures over 1 <= k <= n <= 3, failures {failures:?}"))
}

fn criterion_11() -> Verdict {
    let mut diffs = Vec::new();
    let corpus = fixtures::corpus_text();
    for (name, expected) in &corpus {
        let shipped = std::fs::read_to_string(data(name)).unwrap_or_default();
        if &shipped != expected {
            diffs.push(format!("{name}: shipped file differs from the generator"));
            continue;
        }
        match parse(&shipped) {
            Ok(doc) if print(&doc) == shipped => {}
            _ => diffs.push(format!("{name}: round trip")),
        }
        // every verb's report, computed twice
        let p = parse(&shipped).expect("checked above").payload;
        let reports = |p: &Payload| -> Vec<String> {
            let mut out = vec![report::validate(p).text()];
            if let Payload::Fhs(x) = p {
                out.push(report::k0(x).text());
                out.push(report::decompose(x).map(|o| o.text()).unwrap_or_else(|e| e.to_string()));
                out.push(report::hom(x, x).map(|o| o.text()).unwrap_or_else(|e| e.to_string()));
            }
            if let Payload::Dr(r) = p {
                out.push(report::esv(r).map(|o| o.text()).unwrap_or_else(|e| e.to_string()));
            }
            out
        };
        if reports(&p) != reports(&p) {
            diffs.push(format!("{name}: report not deterministic"));
        }
    }
    Verdict::check(
        diffs.is_empty(),
        format!("{} fixtures round-tripped and re-reported, diffs {diffs:?}", corpus.len()),
    )
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut run = |id: u32, limit: Option<Duration>, f: &mut dyn FnMut() -> Verdict| {
        let t = Instant::now();
        let v = f();
        let took = t.elapsed();
        let in_time = limit.is_none_or(|l| took < l);
        let (word, counts) = match (&v.status, in_time) {
            (Status::Pass, true) => ("PASS", false),
            (Status::KnownConflict, true) => ("FAIL", false),
            _ => ("FAIL", true),
        };
        if counts {
            failed += 1;
        }
        let bound = limit.map_or(String::new(), |l| format!(", limit {} s", l.as_secs()));
        let note = if v.status == Status::KnownConflict {
            " [known conflict: the claimed equality needs F^n = 0; all other sub-checks pass]"
        } else {
            ""
        };
        println!("criterion {id:>2}: {word} ({:.2} s{bound}) {}{note}", took.as_secs_f64(), v.detail);
    };
    let one = Some(Duration::from_secs(1));
    run(1, one, &mut || esv_fixture("nodal-cubic.sharp", Fingerprint::new(0, 1, 1)));
    run(2, one, &mut || esv_fixture("cuspidal-cubic.sharp", Fingerprint::new(1, 0, 0)));
    run(3, one, &mut criterion_3);
    run(4, Some(Duration::from_secs(30)), &mut criterion_4);
    let mut c6 = None;
    run(5, None, &mut || {
        let (a, b) = criteria_5_6();
        c6 = Some(b);
        a
    });
    run(6, None, &mut || c6.take().expect("computed with criterion 5"));
    run(7, None, &mut criterion_7);
    run(8, None, &mut criterion_8);
    run(9, None, &mut criterion_9);
    run(10, None, &mut criterion_10);
    run(11, None, &mut criterion_11);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
