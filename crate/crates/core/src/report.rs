//! Pipelines behind the CLI subcommands, producing JSON reports.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::basechange::BaseChangeReport;
use crate::config::{CheckLevel, CoverConfig, JobConfig};
use crate::covers::{superelliptic_differentials_oracle, Cover, CoverKind};
use crate::engine::{
    chi_omega_total, chi_omega_vertical, evaluate, full_diamond, hodge_middle, pushforward_chi,
    wedge_degrees, BundleSpec, SheafTerm, SymbolicChi,
};
use crate::error::{Error, Result};
use crate::mwbound::{MwReport, DISCREPANCY_NOTE};
use crate::repring::VirtualModule;
use crate::weierstrass::SurfaceReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Basechange,
    Hodge,
    Mwbound,
    Engine,
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Basechange => "basechange",
            Command::Hodge => "hodge",
            Command::Mwbound => "mwbound",
            Command::Engine => "engine",
            Command::Oracle => "oracle",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "analyze" => Command::Analyze,
            "basechange" => Command::Basechange,
            "hodge" => Command::Hodge,
            "mwbound" => Command::Mwbound,
            "engine" => Command::Engine,
            "oracle" => Command::Oracle,
            other => return Err(Error::Config(format!("unknown command {other:?}"))),
        })
    }
}

/// Runs one command; `force_full` overrides the configured check level.
pub fn run(config: &JobConfig, command: Command, force_full: bool) -> Result<Value> {
    let mut out = match command {
        Command::Analyze => cmd_analyze(config)?,
        Command::Basechange => cmd_basechange(config)?,
        Command::Hodge => cmd_hodge(config)?,
        Command::Mwbound => cmd_mwbound(config)?,
        Command::Engine => cmd_engine(config)?,
        Command::Oracle => cmd_oracle(config)?,
    };
    if force_full || config.check_level == CheckLevel::Full {
        let checks = full_checks(config)?;
        out.as_object_mut()
            .expect("reports are objects")
            .insert("checks".into(), json!(checks));
    }
    Ok(out)
}

fn module(v: &VirtualModule) -> Value {
    json!(v.multiplicities())
}

fn surface_json(r: &SurfaceReport) -> Value {
    let fibers: Vec<Value> = r
        .fibers
        .iter()
        .map(|f| {
            json!({
                "place": f.place().to_string(),
                "degree": f.degree(),
                "v_a": f.cluster.v_a,
                "v_b": f.cluster.v_b,
                "v_d": f.cluster.v_d,
                "type": f.kodaira,
                "conductor": f.conductor_exponent(),
                "milnor": f.milnor(),
                "euler": f.euler(),
            })
        })
        .collect();
    json!({
        "n": r.n(),
        "A": r.surface.a.to_strings(),
        "B": r.surface.b.to_strings(),
        "d_E": r.d_e,
        "c_E": r.c_e,
        "mu": r.mu,
        "isotrivial": r.isotrivial,
        "fibers": fibers,
    })
}

fn cover_json(c: &Cover) -> Result<Value> {
    let r = c.report()?;
    let kind = match c.kind() {
        CoverKind::Superelliptic { m, f } => {
            json!({"type": "superelliptic", "m": m, "f": f.to_strings()})
        }
        CoverKind::Abstract => json!({"type": "abstract", "base_genus": c.base_genus()}),
    };
    let branches: Vec<Value> = c
        .branches()
        .iter()
        .map(|b| {
            json!({"locus": b.locus.to_string(), "points": b.count, "inertia": b.inertia, "e": b.e})
        })
        .collect();
    Ok(json!({
        "kind": kind,
        "group_order": c.group_order(),
        "character_dims": c.table().dims(),
        "genus_up": r.genus_up,
        "s": r.s,
        "branches": branches,
        "h0_OZ": module(&r.h0_oz),
        "h0_K": module(&r.h0_k),
        "chi_O": module(&r.chi_o),
    }))
}

pub fn cmd_analyze(config: &JobConfig) -> Result<Value> {
    let report = config.surface()?.report()?;
    Ok(json!({"command": "analyze", "surface": surface_json(&report)}))
}

pub fn cmd_basechange(config: &JobConfig) -> Result<Value> {
    let report = config.surface()?.report()?;
    let cover = config.cover()?;
    let bc = BaseChangeReport::new(&report, &cover)?;
    let branch: Vec<Value> = bc
        .branch_fibers
        .iter()
        .map(|b| {
            json!({"locus": b.locus, "place": b.place.to_string(), "points": b.points, "e": b.e, "type": b.kodaira})
        })
        .collect();
    let up: Vec<Value> = bc
        .fibers_up
        .iter()
        .map(|f| json!({"over": f.over, "type": f.kodaira, "count": f.count, "e": f.e}))
        .collect();
    Ok(json!({
        "command": "basechange",
        "surface": surface_json(&report),
        "cover": cover_json(&cover)?,
        "hypothesis": bc.hypothesis.to_string(),
        "branch_fibers": branch,
        "fibers_up": up,
        "mu_up": bc.mu_up,
        "c_E_up": bc.c_e_up,
        "d_E_up": bc.d_e_up,
        "tjurina": bc.tjurina.as_ref().map(module),
    }))
}

pub fn cmd_hodge(config: &JobConfig) -> Result<Value> {
    let cover = config.cover_or_trivial()?;
    let bundle = config.bundle()?;
    let singular = config.singular();
    let h0k = cover.h0_canonical()?;
    // the Tjurina class is only needed for the singular (1,1) slot
    let tjurina = match (&config.surface, singular) {
        (Some(_), true) => {
            let report = config.surface()?.report()?;
            crate::basechange::tjurina_class(&report, &cover).ok()
        }
        _ => None,
    };
    let diamond = full_diamond(&bundle, singular)?;
    let mut slots = Vec::new();
    for (p, row) in diamond.iter().enumerate() {
        for (q, class) in row.iter().enumerate() {
            let evaluated = match evaluate(class, &h0k, tjurina.as_ref()) {
                Ok(m) => {
                    if !m.is_effective() {
                        return Err(Error::Internal(format!(
                            "[H^{p},{q}] evaluates to the virtual class {m:?}"
                        )));
                    }
                    json!({"module": module(&m), "dim": m.dimension()})
                }
                Err(Error::TjurinaUnavailable) => json!({"module": null, "dim": null}),
                Err(e) => return Err(e),
            };
            let mut slot = json!({"p": p, "q": q, "class": class});
            slot.as_object_mut()
                .unwrap()
                .extend(evaluated.as_object().unwrap().clone());
            slots.push(slot);
        }
    }
    let n = bundle.dim();
    if n == 2 && !singular {
        let m = evaluate(&diamond[1][1], &h0k, None)?;
        if m.dual() != m {
            return Err(Error::Internal("[H^1,1] is not self-dual".into()));
        }
    }
    Ok(json!({
        "command": "hodge",
        "bundle": bundle,
        "singular": singular,
        "cover": cover_json(&cover)?,
        "diamond": slots,
    }))
}

pub fn cmd_mwbound(config: &JobConfig) -> Result<Value> {
    let report = config.surface()?.report()?;
    let cover = config.cover_or_trivial()?;
    let mw = MwReport::new(&report, &cover, config.epsilon)?;
    let iso: Vec<Value> = mw
        .per_isotypic
        .iter()
        .map(|(i, m, d)| json!({"character": i, "multiplicity": m, "dim": d}))
        .collect();
    Ok(json!({
        "command": "mwbound",
        "M": module(&mw.module),
        "rank_bound_dim": mw.rank_bound_dim,
        "pal_bound": mw.pal_bound,
        "pal_bound_plus_variant": mw.pal_bound_plus_variant,
        "epsilon": mw.epsilon,
        "discrepancy_note": DISCREPANCY_NOTE,
        "per_isotypic": iso,
        "trivial_lattice": module(&mw.trivial_lattice),
        "group_order": cover.group_order(),
        "genus_up": cover.genus_up()?,
    }))
}

fn chi_json(chi: SymbolicChi) -> Value {
    json!({"cG": chi.regular, "cO": chi.c_o()})
}

pub fn cmd_engine(config: &JobConfig) -> Result<Value> {
    let bundle = config.bundle()?;
    let singular = config.singular();
    let diamond = full_diamond(&bundle, singular)?;
    let sel = config.engine.clone().unwrap_or_default();
    let mut classes = Vec::new();
    for (p, row) in diamond.iter().enumerate() {
        for (q, class) in row.iter().enumerate() {
            if sel.p.is_some_and(|x| x != p) || sel.q.is_some_and(|x| x != q) {
                continue;
            }
            classes.push(json!({"p": p, "q": q, "class": class}));
        }
    }
    let r = bundle.rank() as i64;
    let mut omega = Vec::new();
    for k in 0..=2 {
        for t in 0..=r {
            omega.push(json!({"t": t, "k": k, "chi": chi_json(chi_omega_total(t, k, &bundle)?)}));
        }
    }
    Ok(json!({
        "command": "engine",
        "bundle": bundle,
        "singular": singular,
        "classes": classes,
        "omega_total": omega,
    }))
}

pub fn cmd_oracle(config: &JobConfig) -> Result<Value> {
    let Some(CoverConfig::Superelliptic { .. }) = &config.cover else {
        return Err(Error::Config(
            "oracle needs a [cover] of type superelliptic".into(),
        ));
    };
    let cover = config.cover()?;
    let CoverKind::Superelliptic { m, f } = cover.kind() else {
        unreachable!()
    };
    let oracle = superelliptic_differentials_oracle(*m, f)?;
    let h0k = cover.h0_canonical()?;
    let halving = cover.h0_canonical_by_halving();
    if oracle != h0k {
        return Err(Error::Internal(format!(
            "differentials {oracle:?} disagree with h0_canonical {h0k:?}"
        )));
    }
    Ok(json!({
        "command": "oracle",
        "m": m,
        "f": f.to_strings(),
        "genus_up": cover.genus_up()?,
        "oracle": module(&oracle),
        "h0_canonical": module(&h0k),
        "agree": true,
        "real_form": module(&cover.canonical_real_form()?),
        "halving": match &halving {
            Ok(v) => module(v),
            Err(e) => json!(e.to_string()),
        },
        "halving_agrees": halving.as_ref().is_ok_and(|v| *v == h0k),
    }))
}

fn expect_pair(name: &str, got: SymbolicChi, want: (i64, i64)) -> Result<()> {
    if got.pair() != want {
        return Err(Error::Internal(format!(
            "{name}: got {:?}, expected {want:?}",
            got.pair()
        )));
    }
    Ok(())
}

/// Weierstrass regression identities of the engine for `deg L = n`.
pub fn engine_regression(n: u32) -> Result<()> {
    let b = BundleSpec::weierstrass(n);
    let n = n as i64;
    expect_pair("K_P(W')", chi_omega_total(3, 1, &b)?, (n, -1))?;
    expect_pair("K_P(2W')", chi_omega_total(3, 2, &b)?, (20 * n, -10))?;
    expect_pair(
        "Omega^2_phi(W')",
        chi_omega_vertical(2, b.divisor_twist(1, false), &b)?,
        (n, 1),
    )?;
    expect_pair(
        "phi^*K(W')",
        pushforward_chi(b.divisor_twist(1, true), &b),
        (10 * n, -10),
    )?;
    let e_k = wedge_degrees(&b, 1)?
        .into_iter()
        .map(|a| pushforward_chi(SheafTerm::new(b.ell + a, true, b.d - 1), &b))
        .fold(SymbolicChi::default(), |x, y| x + y);
    expect_pair("phi^*(E x K)(W')(-1)", e_k, (18 * n, -18))?;
    expect_pair("Omega^2_P(W')", chi_omega_total(2, 1, &b)?, (9 * n, -7))?;
    let d = full_diamond(&b, false)?;
    let want = [
        ((1, 0), (0, -1, 1, 0)),
        ((0, 1), (0, -1, 1, 0)),
        ((2, 0), (n, -1, 0, 0)),
        ((1, 1), (10 * n, -2, 2, 0)),
    ];
    for ((p, q), t) in want {
        if d[p][q].tuple() != t {
            return Err(Error::Internal(format!(
                "H^{p},{q} = {:?}, expected {t:?}",
                d[p][q].tuple()
            )));
        }
    }
    let w = hodge_middle(1, &b, true)?;
    if w.tuple() != (10 * n, -2, 2, 1) {
        return Err(Error::Internal(format!("H^1,1(W') = {:?}", w.tuple())));
    }
    Ok(())
}

/// Every cross-module assertion applicable to the configuration.
pub fn full_checks(config: &JobConfig) -> Result<Vec<String>> {
    let mut done = Vec::new();
    for n in 1..=5 {
        engine_regression(n)?;
    }
    done.push("engine regression vectors n = 1..5".to_string());
    if let Some(s) = &config.surface {
        engine_regression(s.n)?;
        done.push(format!("engine regression vectors n = {}", s.n));
    }
    if let Some(CoverConfig::Superelliptic { .. }) = &config.cover {
        cmd_oracle(config)?;
        done.push("superelliptic differentials agree with h0_canonical".into());
    }
    if config.cover.is_some() {
        let cover = config.cover()?;
        let h0k = cover.h0_canonical()?;
        if cover.is_ramified() && &h0k + &h0k.dual() != cover.canonical_real_form()? {
            return Err(Error::Internal("canonical class identity fails".into()));
        }
        done.push("H^0(K) + dual H^0(K) + H^0(O_Z) = 2[C] + (2g-2+s)[C[G]]".into());
        if config.surface.is_some() {
            let report = config.surface()?.report()?;
            let bc = BaseChangeReport::new(&report, &cover)?;
            let order = cover.group_order();
            if bc.d_e_up != 12 * report.n() * order {
                return Err(Error::Internal("upstairs Euler number".into()));
            }
            done.push("upstairs Euler number = 12 n |G|".into());
            if bc.tjurina.is_some() && !report.isotrivial {
                MwReport::new(&report, &cover, config.epsilon)?;
                done.push("H^1,1 - trivial lattice = covering module".into());
            }
        }
    }
    Ok(done)
}

/// Indented `key: value` rendering of a report.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render(&mut out, v, 0, None);
    out
}

fn render(out: &mut String, v: &Value, indent: usize, key: Option<&str>) {
    let pad = "  ".repeat(indent);
    let label = key.map(|k| format!("{k}: ")).unwrap_or_default();
    match v {
        Value::Object(map) => {
            if key.is_some() {
                let _ = writeln!(out, "{pad}{}", label.trim_end());
            }
            let inner = if key.is_some() { indent + 1 } else { indent };
            render_map(out, map, inner);
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            let _ = writeln!(out, "{pad}{}", label.trim_end());
            for item in items {
                let _ = writeln!(out, "{pad}  -");
                render(out, item, indent + 2, None);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{pad}{label}[{}]", parts.join(", "));
        }
        other => {
            let _ = writeln!(out, "{pad}{label}{}", scalar(other));
        }
    }
}

fn render_map(out: &mut String, map: &Map<String, Value>, indent: usize) {
    for (k, v) in map {
        render(out, v, indent, Some(k));
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "unavailable".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regression_identities_hold() {
        for n in 1..=5 {
            engine_regression(n).unwrap();
        }
    }

    #[test]
    fn text_rendering() {
        let v = json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": null}]});
        let t = render_text(&v);
        assert!(t.contains("a: 1"));
        assert!(t.contains("  c: [1, 2]"));
        assert!(t.contains("e: unavailable"));
    }

    #[test]
    fn command_names() {
        for c in [
            Command::Analyze,
            Command::Basechange,
            Command::Hodge,
            Command::Mwbound,
            Command::Engine,
            Command::Oracle,
        ] {
            assert_eq!(Command::parse(c.name()).unwrap(), c);
        }
        assert!(Command::parse("plot").is_err());
    }
}
