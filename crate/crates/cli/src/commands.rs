use crate::input::{
    complex_from, germ_json, germ_text, jacobian_text, model_json, parse_json, CliError, CliResult, IdentityDoc,
    MapDoc, ModelDoc, PairDoc,
};
use corners::fibre::{
    boundary_formula_checks, corner_identity_check, fibre_product, is_strongly_transverse, is_transverse,
    ClassKind,
};
use corners::linalg::fmt_q;
use corners::model::{all_subsets, ModelCorner};
use corners::orient::{
    boundary_orientation_sign, fibre_product_orientation_with, verify_sign_identity, SignIdentity, SignInstance,
    Splitting,
};
use corners::poly::{classify_at_origin, compose_poly, Classification, PolyMap};
use corners::suites::{run_suite, SuiteOptions, SUITES};
use corners::{compose, CornerMapGerm};
use serde_json::{json, Value};

/// Text lines and a JSON value describing the same result.
pub struct Report {
    pub text: Vec<String>,
    pub json: Value,
    pub exit: i32,
}

impl Report {
    fn ok(text: Vec<String>, json: Value) -> Self {
        Report { text, json, exit: 0 }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn classification_json(c: &Classification) -> Value {
    match c {
        Classification::NotIntoModel { row, witness } => {
            json!({"class": c.name(), "row": row, "witness": witness.iter().map(fmt_q).collect::<Vec<_>>()})
        }
        Classification::WeaklySmoothOnly { failing_rows } => json!({"class": c.name(), "failing_rows": failing_rows}),
        Classification::BMap(b) => json!({
            "class": c.name(),
            "smooth": false,
            "exponents": b.exponents,
            "flat_rows": b.flat_rows.to_vec(),
            "units": b.units.iter().map(|(j, u)| (j.to_string(), Value::from(fmt_q(u)))).collect::<serde_json::Map<_, _>>(),
        }),
        Classification::JoyceSmooth(g) => json!({"class": c.name(), "smooth": true, "germ": germ_json(g)}),
    }
}

fn classification_text(c: &Classification) -> Vec<String> {
    match c {
        Classification::NotIntoModel { row, witness } => {
            let w: Vec<String> = witness.iter().map(fmt_q).collect();
            vec![format!("not into model: component {row} is negative at ({})", w.join(", "))]
        }
        Classification::WeaklySmoothOnly { failing_rows } => {
            let r: Vec<String> = failing_rows.iter().map(|r| r.to_string()).collect();
            vec![format!("weakly smooth only (not of b-map form in rows {})", r.join(", "))]
        }
        Classification::BMap(b) => vec![
            format!("b-map, exponents {}, not smooth", b.describe_exponents()),
            format!("units at origin: {}", b.describe_units()),
        ],
        Classification::JoyceSmooth(g) => {
            let mut out = vec![format!("smooth, {}", germ_text(g))];
            out.push(format!(
                "immersion: {}, submersion: {}, b-submersive: {}",
                yes_no(g.is_immersion()),
                yes_no(g.is_submersion()),
                yes_no(g.is_b_submersive())
            ));
            out
        }
    }
}

pub fn classify(text: &str) -> CliResult<Report> {
    let doc: MapDoc = parse_json(text, "polynomial map")?;
    let map = doc.poly()?;
    let c = classify_at_origin(&map);
    let mut lines = vec![format!("map: {map}")];
    lines.extend(classification_text(&c));
    Ok(Report::ok(lines, classification_json(&c)))
}

fn germ_properties(g: &CornerMapGerm) -> CliResult<(Vec<String>, Value)> {
    let xi = g.xi_data();
    let dec = g.boundary_decomposition();
    let mut lines = vec![
        format!("germ: {}", germ_text(g)),
        format!(
            "immersion: {}, submersion: {}, b-submersive: {}, diffeomorphism: {}",
            yes_no(g.is_immersion()),
            yes_no(g.is_submersion()),
            yes_no(g.is_b_submersive()),
            yes_no(g.is_diffeomorphism())
        ),
        format!("flat target faces: {}", xi.plus),
        format!("source faces hit: {}, not hit: {}", dec.minus_faces, dec.plus_faces),
    ];
    let mut j = json!({
        "germ": germ_json(g),
        "immersion": g.is_immersion(),
        "submersion": g.is_submersion(),
        "b_submersive": g.is_b_submersive(),
        "diffeomorphism": g.is_diffeomorphism(),
        "flat_faces": xi.plus.to_vec(),
        "minus_faces": dec.minus_faces.to_vec(),
        "plus_faces": dec.plus_faces.to_vec(),
    });
    if g.is_b_submersive() {
        let lifts = g.b_submersive_lifts()?;
        for (i, h) in &lifts.plus {
            lines.push(format!("f_+ on source face {i}: {}", germ_text(h)));
        }
        for (i, t, h) in &lifts.minus {
            lines.push(format!("f_- on source face {i} into target face {t}: {}", germ_text(h)));
        }
        j["lifts"] = json!({
            "plus": lifts.plus.iter().map(|(i, h)| json!({"face": i, "germ": germ_json(h)})).collect::<Vec<_>>(),
            "minus": lifts.minus.iter().map(|(i, t, h)| json!({"face": i, "target_face": t, "germ": germ_json(h)})).collect::<Vec<_>>(),
        });
    }
    if g.is_submersion() {
        let nf = g.submersion_normal_form()?;
        lines.push(format!(
            "normal form: {} x {}, witness {}",
            nf.y_model,
            nf.z_model,
            germ_text(&nf.witness)
        ));
        j["normal_form"] = json!({
            "y": model_json(nf.y_model),
            "z": model_json(nf.z_model),
            "source_reorder": nf.source_reorder,
            "witness": germ_json(&nf.witness),
        });
    }
    Ok((lines, j))
}

pub fn germ(text: &str) -> CliResult<Report> {
    let doc: MapDoc = parse_json(text, "map")?;
    let g = doc.resolve()?;
    let (lines, j) = germ_properties(&g)?;
    Ok(Report::ok(lines, j))
}

pub fn compose_cmd(text: &str) -> CliResult<Report> {
    let doc: PairDoc = parse_json(text, "pair {\"f\", \"g\"}")?;
    if let (MapDoc::Poly { .. }, MapDoc::Poly { .. }) = (&doc.f, &doc.g) {
        // polynomials compose even when they are not smooth
        let p: PolyMap = compose_poly(&doc.g.poly()?, &doc.f.poly()?)?;
        let c = classify_at_origin(&p);
        let mut lines = vec![format!("g o f: {p}")];
        lines.extend(classification_text(&c));
        let j = json!({
            "polynomial": p.components().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "classification": classification_json(&c),
        });
        return Ok(Report::ok(lines, j));
    }
    let (f, g) = (doc.f.resolve()?, doc.g.resolve()?);
    let h = compose(&g, &f)?;
    Ok(Report::ok(vec![format!("g o f: {}", germ_text(&h))], json!({ "germ": germ_json(&h) })))
}

fn model_report(m: ModelCorner) -> CliResult<Report> {
    let mut lines = vec![format!("model: {m}")];
    let counts: Vec<u128> = (0..=m.depth).map(|j| m.corners_count(j)).collect();
    let ordered: Vec<u128> = (0..=m.depth).map(|j| m.iterated_boundary_count(j)).collect();
    let signs = m.faces().map(|i| boundary_orientation_sign(m, i)).collect::<Result<Vec<_>, _>>()?;
    for j in 0..=m.depth {
        lines.push(format!(
            "depth {j}: {} strata of model {}, {} ordered boundary pieces",
            counts[j],
            m.stratum_model(j),
            ordered[j]
        ));
    }
    let s: Vec<String> = signs.iter().map(|x| format!("{x:+}")).collect();
    lines.push(format!("boundary face orientation signs: [{}]", s.join(", ")));
    let j = json!({
        "model": model_json(m),
        "corners_count": counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "iterated_boundary_count": ordered.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "boundary_signs": signs,
    });
    Ok(Report::ok(lines, j))
}

pub fn corners(text: &str) -> CliResult<Report> {
    if let Ok(m) = serde_json::from_str::<ModelDoc>(text) {
        return model_report(m.model()?);
    }
    let doc: MapDoc = parse_json(text, "model or map")?;
    let g = doc.resolve()?;
    let mut lines = vec![format!("germ: {}", germ_text(&g))];
    let mut rows = Vec::new();
    for a in all_subsets(g.source().depth) {
        let c = g.corner_map(&a)?;
        let h = g.hat_corner_map(&a)?;
        lines.push(format!(
            "{a} -> C: {} via {}; hat C: {}",
            c.target_label,
            jacobian_text(&c.restricted),
            h.target_label
        ));
        rows.push(json!({
            "label": a.to_vec(),
            "target": c.target_label.to_vec(),
            "restricted": germ_json(&c.restricted),
            "hat_target": h.target_label.to_vec(),
            "hat_restricted": germ_json(&h.restricted),
        }));
    }
    Ok(Report::ok(lines, json!({ "germ": germ_json(&g), "strata": rows })))
}

fn signs_of(o: Option<[i8; 3]>) -> CliResult<[i8; 3]> {
    let o = o.unwrap_or([1, 1, 1]);
    if o.iter().any(|&s| s != 1 && s != -1) {
        return Err(CliError::Input("orientations must be 1 or -1".into()));
    }
    Ok(o)
}

pub fn fibre(text: &str) -> CliResult<Report> {
    let doc: PairDoc = parse_json(text, "pair {\"f\", \"g\"}")?;
    let (f, g) = (doc.f.resolve()?, doc.g.resolve()?);
    let [ox, oy, oz] = signs_of(doc.orientations)?;
    if f.target() != g.target() {
        return Err(CliError::Input(format!("targets differ: {} and {}", f.target(), g.target())));
    }
    if !is_transverse(&f, &g)? {
        return Ok(Report { text: vec!["not transverse".into()], json: json!({ "transverse": false }), exit: 1 });
    }
    let strong = is_strongly_transverse(&f, &g)?;
    let l = fibre_product(&f, &g)?;
    let itf = &l.interface;
    let mut lines = vec![format!(
        "transverse; {}; W={}",
        if strong { "strongly transverse" } else { "NOT strongly transverse" },
        l.w_model
    )];
    let v = itf.verdicts;
    lines.push(format!(
        "conditions: A {}, B {}, C {}, D {}",
        yes_no(v.a),
        yes_no(v.b),
        yes_no(v.c),
        yes_no(v.d)
    ));
    lines.push(format!("P(f) = {}, P(g) = {}, Q = {}", itf.p_f, itf.p_g, itf.q));
    let mut classes = Vec::new();
    for e in &itf.classes {
        let kind = match e.kind {
            ClassKind::A => "a",
            ClassKind::B => "b",
        };
        lines.push(format!(
            "class {}: type ({kind}), X faces {}, Y faces {}{}",
            e.members,
            e.x_faces,
            e.y_faces,
            if e.forced_zero { ", vanishes on W" } else { "" }
        ));
        classes.push(json!({
            "members": e.members.to_vec(), "kind": kind, "x_faces": e.x_faces.to_vec(),
            "y_faces": e.y_faces.to_vec(), "vanishes": e.forced_zero,
        }));
    }
    let registry: Vec<String> = (1..=l.registry.len()).map(|r| l.describe_face(r)).collect();
    for (r, d) in registry.iter().enumerate() {
        lines.push(format!("W face {}: {d}", r + 1));
    }
    lines.push(format!("pi_X: {}", germ_text(&l.pi_x)));
    lines.push(format!("pi_Y: {}", germ_text(&l.pi_y)));

    let ci = corner_identity_check(&f, &g)?;
    let mut rows = Vec::new();
    let mut first_failure = None;
    for row in &ci.rows {
        let ok = row.bijection.unwrap_or(row.lhs.len() == row.rhs.len());
        if !ok && first_failure.is_none() {
            first_failure = Some((row.i, row.lhs.len(), row.rhs.len()));
        }
        rows.push(json!({"i": row.i, "lhs": row.lhs.len(), "rhs": row.rhs.len(), "bijection": row.bijection}));
    }
    lines.push(match first_failure {
        None => "corner identity holds".into(),
        Some((i, a, b)) => format!("corner identity FAILS at i={i} (LHS {a}, RHS {b})"),
    });

    let mut formulas = Vec::new();
    if let Ok(reports) = boundary_formula_checks(&f, &g) {
        for r in reports {
            lines.push(format!("boundary formula {}: {}", r.formula, if r.holds() { "holds" } else { "FAILS" }));
            formulas.push(json!({"formula": r.formula.name(), "holds": r.holds(), "problems": r.problems}));
        }
    }
    let left = fibre_product_orientation_with(&f, &g, ox, oy, oz, &l, Splitting::Leftmost)?;
    let right = fibre_product_orientation_with(&f, &g, ox, oy, oz, &l, Splitting::Rightmost)?;
    lines.push(format!("orientation of W: {left:+} (other splitting: {right:+})"));

    let j = json!({
        "transverse": true,
        "strongly_transverse": strong,
        "conditions": {"A": v.a, "B": v.b, "C": v.c, "D": v.d},
        "P_f": itf.p_f.to_vec(), "P_g": itf.p_g.to_vec(), "Q": itf.q.to_vec(),
        "classes": classes,
        "W": model_json(l.w_model),
        "registry": registry,
        "pi_X": germ_json(&l.pi_x),
        "pi_Y": germ_json(&l.pi_y),
        "corner_identity": rows,
        "corner_identity_holds": first_failure.is_none(),
        "boundary_formulas": formulas,
        "orientation": left,
    });
    Ok(Report::ok(lines, j))
}

pub fn orient(text: &str) -> CliResult<Report> {
    let value: Value = parse_json(text, "orientation input")?;
    if value.get("identity").is_none() {
        return fibre_orientation(text);
    }
    let doc: IdentityDoc = parse_json(text, "identity instance")?;
    let which = SignIdentity::from_name(&doc.identity).ok_or_else(|| {
        let names: Vec<&str> = SignIdentity::ALL.iter().map(|i| i.name()).collect();
        CliError::Input(format!("unknown identity {:?}; known: {}", doc.identity, names.join(", ")))
    })?;
    let maps = doc.maps.iter().map(MapDoc::resolve).collect::<CliResult<Vec<_>>>()?;
    let r = verify_sign_identity(which, &SignInstance { maps, signs: doc.signs })?;
    let mut lines = vec![format!("{which}: {}", if r.holds() { "holds" } else { "FAILS" })];
    for c in &r.checks {
        lines.push(format!(
            "  {}: lhs {:+}, rhs {:+}, predicted {:+}, det {:+}",
            c.label, c.lhs, c.rhs, c.predicted, c.jacobian
        ));
    }
    for p in &r.problems {
        lines.push(format!("  problem: {p}"));
    }
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({"label": c.label, "lhs": c.lhs, "rhs": c.rhs, "predicted": c.predicted, "jacobian": c.jacobian, "holds": c.holds()}))
        .collect();
    let j = json!({"identity": which.name(), "holds": r.holds(), "checks": checks, "problems": r.problems});
    Ok(Report { text: lines, json: j, exit: if r.holds() { 0 } else { 1 } })
}

fn fibre_orientation(text: &str) -> CliResult<Report> {
    let doc: PairDoc = parse_json(text, "pair {\"f\", \"g\", \"orientations\"}")?;
    let (f, g) = (doc.f.resolve()?, doc.g.resolve()?);
    let [ox, oy, oz] = signs_of(doc.orientations)?;
    let l = fibre_product(&f, &g)?;
    let left = fibre_product_orientation_with(&f, &g, ox, oy, oz, &l, Splitting::Leftmost)?;
    let right = fibre_product_orientation_with(&f, &g, ox, oy, oz, &l, Splitting::Rightmost)?;
    let lines = vec![
        format!("W = {}, orientation {left:+}", l.w_model),
        format!("splittings agree: {}", yes_no(left == right)),
    ];
    let j = json!({"W": model_json(l.w_model), "orientation": left, "splittings_agree": left == right});
    Ok(Report { text: lines, json: j, exit: if left == right { 0 } else { 1 } })
}

pub fn complex(text: Option<&str>, corpus: Option<&str>, dump: bool) -> CliResult<Report> {
    let (name, c) = complex_from(text, corpus)?;
    if dump {
        let j = serde_json::to_value(&c).expect("complex serializes");
        return Ok(Report::ok(vec![serde_json::to_string_pretty(&j).expect("json")], j));
    }
    let cl = c.classify();
    let bg = c.boundary_graph();
    let counts: Vec<usize> = (0..=c.max_depth()).map(|k| c.corners_count(k)).collect();
    let mut lines = vec![
        format!("{name}: {} charts of dimension {}, {} connected components", c.charts.len(), c.dim, c.components().len()),
        format!("classification: {}", cl.summary()),
        format!(
            "plain: {}, with faces: {}, embedded corners: {}",
            yes_no(cl.plain),
            yes_no(cl.with_faces),
            cl.embedded_corners.map_or("no".into(), |n| format!("N={n}"))
        ),
        format!("boundary: {} components, {} corner edges", bg.components.len(), bg.edges.len()),
    ];
    for (a, b) in &bg.edges {
        lines.push(format!("  edge {a} -- {b}"));
    }
    lines.push(format!("corner counts by depth: {counts:?}"));
    if let Some(w) = &cl.angle_witness {
        lines.push(format!("face decomposition: {w:?}"));
    }
    let j = json!({
        "name": name,
        "plain": cl.plain,
        "with_faces": cl.with_faces,
        "embedded_corners": cl.embedded_corners,
        "angle_witness": cl.angle_witness,
        "summary": cl.summary(),
        "boundary_components": bg.components.len(),
        "boundary_edges": bg.edges,
        "corners_count": counts,
    });
    Ok(Report::ok(lines, j))
}

pub fn verify(suite: &str, opts: SuiteOptions) -> CliResult<Report> {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut lines = Vec::new();
    let mut out = Vec::new();
    let mut failed = false;
    for name in names {
        let r = run_suite(name, opts)
            .ok_or_else(|| CliError::Input(format!("unknown suite {name:?}; known: all, {}", SUITES.join(", "))))??;
        failed |= !r.passed();
        lines.extend(r.to_string().lines().map(String::from));
        let tally: serde_json::Map<String, Value> = r
            .tally
            .iter()
            .map(|(k, t)| (k.clone(), json!({"passed": t.passed, "failed": t.failed})))
            .collect();
        out.push(json!({"suite": r.name, "cases": r.cases, "passed": r.passed(), "checks": tally, "failures": r.failures}));
    }
    let j = json!({"seed": opts.seed, "cases": opts.cases, "max_dim": opts.max_dim, "suites": out});
    Ok(Report { text: lines, json: j, exit: if failed { 1 } else { 0 } })
}

