//! The five registered commands: `analyze`, `ideals`, `kgroups`, `set`,
//! and `selfcheck`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use cuntz_ideals::classify::{
    is_primitive, is_simple, primitive_ideal_space, strong_connes_spectrum,
};
use cuntz_ideals::ext::{parse_angle, project_to_gamma};
use cuntz_ideals::group::{gcd, parse_elem, GroupElem, GroupSpec};
use cuntz_ideals::ktheory::{kgroups_finite, presentation_matrix};
use cuntz_ideals::semigroup::{condition_check, make_semigroup};
use cuntz_ideals::sets::{
    brute_force_invariant_sets, ideal_lattice_finite, is_bad, is_invariant_finite,
    is_prime_finite, is_prime_finitary, FiniteSet,
};
use cuntz_ideals::{ActionSpec, Error, Result};

use crate::registry::{AnalysisCommand, CmdOutput, RunContext};
use crate::render::{elem_str, finitary_str, finite_set_str};
use crate::setexpr::{eval, parse_expr, SetValue};

fn no_dot() -> Option<String> {
    None
}

fn indices_str(indices: &BTreeSet<usize>) -> String {
    format!(
        "{{{}}}",
        indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    )
}

/// A closed-form description of the strong Connes spectrum where one
/// exists, otherwise an honest fallback.
fn spectrum_string(action: &ActionSpec) -> Result<String> {
    let sp = strong_connes_spectrum(action)?;
    if let Some(x) = sp.explicit() {
        return finite_set_str(x);
    }
    let g = action.group();
    if g.rank() == 1 && g.torsion().is_empty() {
        // The spectrum sits inside dZ for d = gcd of the weights; if ±d is
        // a member the semigroup structure pins it down exactly.
        let d = action
            .omega()
            .iter()
            .fold(0u64, |acc, w| gcd(acc, w.coords()[0].unsigned_abs()));
        if d == 0 {
            return Ok("{0}".into());
        }
        let pos = sp.member(&g.elem(&[d as i64])?)?;
        let neg = sp.member(&g.elem(&[-(d as i64)])?)?;
        let name = |s: &str| if d == 1 { s.to_string() } else { format!("{d}{s}") };
        return Ok(match (pos, neg) {
            (true, true) => name("Z"),
            (true, false) => name("N"),
            (false, true) => format!("-{}", name("N")),
            (false, false) => format!("subsemigroup of {} (membership oracle only)", name("Z")),
        });
    }
    Ok("membership oracle only (no closed form)".into())
}

pub struct Analyze;

impl AnalysisCommand for Analyze {
    fn name(&self) -> &'static str {
        "analyze"
    }

    fn about(&self) -> &'static str {
        "Full verdict: simplicity, primitivity, escape condition, spectrum, primitive ideal space"
    }

    fn run(&self, ctx: &RunContext) -> Result<CmdOutput> {
        let action = &ctx.input()?.action;
        let simple = is_simple(action)?;
        let primitive = is_primitive(action)?;
        let prim = primitive_ideal_space(action)?;
        let cond = &prim.condition;
        let spectrum = spectrum_string(action)?;

        let prim_json: Vec<Value> = prim
            .components
            .iter()
            .map(|c| json!({"I": indices_str(&c.rep), "space": c.space.to_string()}))
            .collect();
        let json = json!({
            "simple": simple,
            "primitive": primitive,
            "condition": {
                "holds": cond.holds,
                "failing_index": cond.failing_index,
                "K": cond.order_k,
            },
            "spectrum": spectrum,
            "prim": prim_json,
        });

        let mut text = String::new();
        text.push_str(&format!("group:      {}\n", action.group()));
        text.push_str(&format!(
            "weights:    [{}]\n",
            action.omega().iter().map(elem_str).collect::<Vec<_>>().join(", ")
        ));
        text.push_str(&format!("simple:     {simple}\n"));
        text.push_str(&format!("primitive:  {primitive}\n"));
        match (cond.holds, cond.failing_index, cond.order_k) {
            (true, _, _) => text.push_str("condition:  holds (all ideals gauge-invariant)\n"),
            (false, Some(i), Some(k)) => text.push_str(&format!(
                "condition:  fails at index {i} (weight of order K = {k})\n"
            )),
            _ => text.push_str("condition:  fails\n"),
        }
        text.push_str(&format!("spectrum:   {spectrum}\n"));
        text.push_str("prim components:\n");
        for c in &prim.components {
            text.push_str(&format!("  I = {:<8} -> {}\n", indices_str(&c.rep), c.space));
        }

        Ok(CmdOutput { text, json, dot: no_dot() })
    }
}

pub struct Ideals;

impl AnalysisCommand for Ideals {
    fn name(&self) -> &'static str {
        "ideals"
    }

    fn about(&self) -> &'static str {
        "List the ideal lattice of a finite dual group (text/JSON listing or DOT Hasse diagram)"
    }

    fn run(&self, ctx: &RunContext) -> Result<CmdOutput> {
        let action = &ctx.input()?.action;
        if !action.group().is_finite() {
            return Err(Error::InfiniteGroup(
                "explicit ideal lattice listing; use the `set` command for atom-union queries"
                    .into(),
            ));
        }
        let lat = ideal_lattice_finite(action)?;
        let k = lat.coset_reps.len();
        let count = lat.count.clone();

        if count > BigUint::from(action.limits().max_dot_nodes) {
            // Too many ideals to enumerate: emit the summary everywhere.
            let summary = format!(
                "{count} ideals: the Boolean lattice on {k} cosets of the weight subgroup \
                 (too many nodes to list; cap {})",
                action.limits().max_dot_nodes
            );
            let json = json!({
                "count": count.to_string(),
                "cosets": k,
                "summary": summary,
            });
            let dot = format!("digraph ideal_lattice {{\n  // {summary}\n}}\n");
            return Ok(CmdOutput { text: summary + "\n", json, dot: Some(dot) });
        }

        let cosets: Vec<FiniteSet> = lat
            .coset_reps
            .iter()
            .map(|r| lat.coset(action, r))
            .collect::<Result<_>>()?;
        let spec = action.group();
        let mut labels: Vec<String> = Vec::new();
        for mask in 0u64..(1u64 << k) {
            let mut x = FiniteSet::empty(spec)?;
            for (i, coset) in cosets.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    x = x.union(coset)?;
                }
            }
            labels.push(finite_set_str(&x)?);
        }

        let mut text = format!("{count} ideals over {} cosets:\n", k);
        for label in &labels {
            text.push_str(&format!("  {label}\n"));
        }
        let json = json!({
            "count": count.to_string(),
            "cosets": k,
            "ideals": labels,
        });

        // Hasse diagram of the Boolean lattice: covering edges add one coset.
        let mut dot = String::from("digraph ideal_lattice {\n  rankdir=BT;\n");
        for (mask, label) in labels.iter().enumerate() {
            dot.push_str(&format!("  n{mask} [label=\"{label}\"];\n"));
        }
        for mask in 0u64..(1u64 << k) {
            for i in 0..k {
                if mask & (1 << i) == 0 {
                    dot.push_str(&format!("  n{mask} -> n{};\n", mask | (1 << i)));
                }
            }
        }
        dot.push_str("}\n");

        Ok(CmdOutput { text, json, dot: Some(dot) })
    }
}

pub struct KGroups;

impl AnalysisCommand for KGroups {
    fn name(&self) -> &'static str {
        "kgroups"
    }

    fn about(&self) -> &'static str {
        "K-groups of the crossed product (explicit for finite dual groups, symbolic otherwise)"
    }

    fn run(&self, ctx: &RunContext) -> Result<CmdOutput> {
        let action = &ctx.input()?.action;
        if action.group().is_finite() {
            let r = kgroups_finite(action)?;
            let factors: Vec<Value> = r
                .k0_torsion
                .iter()
                .map(|f| match u64::try_from(f) {
                    Ok(n) => json!(n),
                    Err(_) => json!(f.to_string()),
                })
                .collect();
            let json = json!({
                "K0": {"factors": factors, "free_rank": r.k0_free_rank},
                "K1": {"free_rank": r.k1_free_rank},
            });
            let text = format!("K0 = {}\nK1 = {}\n", r.k0_string(), r.k1_string());
            Ok(CmdOutput { text, json, dot: no_dot() })
        } else {
            let p = presentation_matrix(action)?;
            let json = if p.relations.is_empty() {
                json!({"presentation": p.expr})
            } else {
                json!({"presentation": p.expr, "relations": p.relations})
            };
            let mut text = format!("K0-map presentation: {}\n", p.expr);
            for rel in &p.relations {
                text.push_str(&format!("  with {rel}\n"));
            }
            Ok(CmdOutput { text, json, dot: no_dot() })
        }
    }
}

pub struct SetQuery;

/// A witness that a finite set is not invariant: an element of the
/// symmetric difference of `X` and `⋃ (X + ω_i)`.
fn non_invariance_witness(action: &ActionSpec, x: &FiniteSet) -> Result<GroupElem> {
    let spec = action.group();
    let mut shifted = FiniteSet::empty(spec)?;
    for w in action.omega() {
        shifted = shifted.union(&x.translate(w)?)?;
    }
    for e in spec.enumerate()? {
        if x.contains(&e)? != shifted.contains(&e)? {
            return Ok(e);
        }
    }
    Err(Error::Precondition("no witness: the set is invariant".into()))
}

impl AnalysisCommand for SetQuery {
    fn name(&self) -> &'static str {
        "set"
    }

    fn about(&self) -> &'static str {
        "Evaluate a set expression from the [query] section and report its properties"
    }

    fn run(&self, ctx: &RunContext) -> Result<CmdOutput> {
        let input = ctx.input()?;
        let action = &input.action;
        for key in input.query.keys() {
            if !matches!(key.as_str(), "expr" | "predicates" | "member") {
                return Err(Error::Parse(format!("unknown [query] key `{key}`")));
            }
        }
        let expr_text = input
            .query
            .get("expr")
            .ok_or_else(|| Error::Parse("missing `expr` in [query]".into()))?;
        let value = eval(action, &parse_expr(expr_text)?)?;
        let chosen: Option<BTreeSet<String>> = input
            .query
            .get("predicates")
            .map(|s| s.split(',').map(|p| p.trim().to_string()).collect());
        if let Some(set) = &chosen {
            for p in set {
                if !matches!(p.as_str(), "invariant" | "prime" | "bad" | "member" | "project") {
                    return Err(Error::Parse(format!("unknown predicate `{p}`")));
                }
            }
        }
        let wanted = |p: &str| chosen.as_ref().map_or(true, |s| s.contains(p));
        let member_key = input.query.get("member");

        let mut json = serde_json::Map::new();
        let mut text = String::new();
        match value {
            SetValue::Finite(x) => {
                json.insert("set".into(), json!(finite_set_str(&x)?));
                text.push_str(&format!("set:       {}\n", finite_set_str(&x)?));
                let invariant = is_invariant_finite(action, &x)?;
                if wanted("invariant") {
                    json.insert("invariant".into(), json!(invariant));
                    text.push_str(&format!("invariant: {invariant}\n"));
                }
                if wanted("prime") || wanted("bad") {
                    if !invariant {
                        let w = non_invariance_witness(action, &x)?;
                        return Err(Error::Precondition(format!(
                            "prime/bad need an invariant set; witness element {}",
                            elem_str(&w)
                        )));
                    }
                    if wanted("prime") {
                        let prime = is_prime_finite(action, &x)?.is_some();
                        json.insert("prime".into(), json!(prime));
                        text.push_str(&format!("prime:     {prime}\n"));
                    }
                    if wanted("bad") {
                        // Finite dual group: the escape condition holds, so
                        // every invariant set is good.
                        json.insert("bad".into(), json!(false));
                        text.push_str("bad:       false\n");
                    }
                }
                if let Some(m) = member_key {
                    let e = parse_elem(action.group(), m)?;
                    let hit = x.contains(&e)?;
                    json.insert("member".into(), json!(hit));
                    text.push_str(&format!("member {}: {hit}\n", elem_str(&e)));
                }
            }
            SetValue::Finitary(x) => {
                json.insert("set".into(), json!(finitary_str(&x)));
                text.push_str(&format!("set:       {}\n", finitary_str(&x)));
                if wanted("invariant") {
                    // Atom unions are invariant by construction.
                    json.insert("invariant".into(), json!(true));
                    text.push_str("invariant: true\n");
                }
                if wanted("prime") {
                    let prime = is_prime_finitary(&x)?.is_some();
                    json.insert("prime".into(), json!(prime));
                    text.push_str(&format!("prime:     {prime}\n"));
                }
                if wanted("bad") {
                    let report = condition_check(action)?;
                    match is_bad(&x, &report)? {
                        Some(w) => {
                            json.insert("bad".into(), json!(true));
                            json.insert("bad_witness".into(), json!(elem_str(&w)));
                            text.push_str(&format!("bad:       true (witness {})\n", elem_str(&w)));
                        }
                        None => {
                            json.insert("bad".into(), json!(false));
                            text.push_str("bad:       false\n");
                        }
                    }
                }
                if let Some(m) = member_key {
                    let e = parse_elem(action.group(), m)?;
                    let hit = x.member(&e)?;
                    json.insert("member".into(), json!(hit));
                    text.push_str(&format!("member {}: {hit}\n", elem_str(&e)));
                }
            }
            SetValue::Ext(y, nfa) => {
                let invariant = y.is_invariant(&nfa)?;
                if wanted("invariant") {
                    json.insert("invariant".into(), json!(invariant));
                    text.push_str(&format!("invariant: {invariant}\n"));
                }
                if wanted("project") {
                    if !invariant {
                        return Err(Error::Precondition(
                            "projection needs an invariant subset of Γ' × T".into(),
                        ));
                    }
                    let support = project_to_gamma(&nfa, &y)?;
                    json.insert("project".into(), json!(finitary_str(&support)));
                    text.push_str(&format!("project:   {}\n", finitary_str(&support)));
                }
                if let Some(m) = member_key {
                    // `member = ELEM, p/q` over Γ' × T.
                    let (elem_part, angle_part) = m.rsplit_once(',').ok_or_else(|| {
                        Error::Parse(format!("expected `element, p/q`, got `{m}`"))
                    })?;
                    let e = parse_elem(nfa.projected().group(), elem_part)?;
                    let theta = parse_angle(angle_part)?;
                    let hit = y.contains(&e, &theta)?;
                    json.insert("member".into(), json!(hit));
                    text.push_str(&format!("member ({}, {theta}): {hit}\n", elem_str(&e)));
                }
            }
        }

        Ok(CmdOutput { text, json: Value::Object(json), dot: no_dot() })
    }
}

pub struct SelfCheck;

/// Closure of `{0}` under the generators inside a coordinate box.
fn box_closure(spec: &GroupSpec, generators: &[GroupElem], bound: i64) -> Result<HashSet<Vec<i64>>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::from([spec.zero().coords().to_vec()]);
    let mut queue: VecDeque<GroupElem> = VecDeque::from([spec.zero()]);
    while let Some(here) = queue.pop_front() {
        for g in generators {
            let next = spec.add(&here, g)?;
            if next.free_coords().iter().any(|c| c.abs() > bound) {
                continue;
            }
            if seen.insert(next.coords().to_vec()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

impl AnalysisCommand for SelfCheck {
    fn name(&self) -> &'static str {
        "selfcheck"
    }

    fn about(&self) -> &'static str {
        "Seeded randomized cross-checks of the analysis engines against brute-force oracles"
    }

    fn needs_input(&self) -> bool {
        false
    }

    fn run(&self, ctx: &RunContext) -> Result<CmdOutput> {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let mut comparisons = 0usize;

        // Finite dual groups: ideal count, simplicity, spectrum.
        for k in 2u64..=8 {
            let g = GroupSpec::new(0, vec![k])?;
            for _ in 0..10 {
                let n = rng.gen_range(2..=3usize);
                let omega: Vec<GroupElem> = (0..n)
                    .map(|_| g.elem(&[rng.gen_range(0..k as i64)]))
                    .collect::<Result<_>>()?;
                let action = ActionSpec::new(g.clone(), omega)?;
                let brute = brute_force_invariant_sets(&action)?;
                let lat = ideal_lattice_finite(&action)?;
                if BigUint::from(brute.len()) != lat.count {
                    return Err(Error::Precondition(format!(
                        "selfcheck mismatch: ideal count over {g} (brute {}, lattice {})",
                        brute.len(),
                        lat.count
                    )));
                }
                if is_simple(&action)? != (brute.len() == 2) {
                    return Err(Error::Precondition(format!(
                        "selfcheck mismatch: simplicity over {g}"
                    )));
                }
                let sp = strong_connes_spectrum(&action)?;
                let explicit = sp.explicit().expect("finite group");
                for e in g.enumerate()? {
                    let mut keeps_all = true;
                    for x in &brute {
                        if !x.translate(&e)?.is_subset(x)? {
                            keeps_all = false;
                            break;
                        }
                    }
                    if explicit.contains(&e)? != keeps_all {
                        return Err(Error::Precondition(format!(
                            "selfcheck mismatch: spectrum at {} over {g}",
                            elem_str(&e)
                        )));
                    }
                    comparisons += 1;
                }
                comparisons += 2;
            }
        }

        // Infinite dual group: membership against a boxed closure.
        let g = GroupSpec::free(1);
        for _ in 0..10 {
            let n = rng.gen_range(2..=3usize);
            let omega: Vec<GroupElem> = (0..n)
                .map(|_| g.elem(&[rng.gen_range(-3..=3i64)]))
                .collect::<Result<_>>()?;
            let action = ActionSpec::new(g.clone(), omega)?;
            let indices: BTreeSet<usize> = (1..=n).filter(|_| rng.gen_bool(0.4)).collect();
            let s = make_semigroup(&action, &indices)?;
            let oracle = box_closure(&g, s.generators(), 24)?;
            for q in -8i64..=8 {
                let e = g.elem(&[q])?;
                if s.member(&e)? != oracle.contains(e.coords()) {
                    return Err(Error::Precondition(format!(
                        "selfcheck mismatch: membership of {q}"
                    )));
                }
                comparisons += 1;
            }
        }

        let text = format!("selfcheck passed: {comparisons} comparisons (seed {})\n", ctx.seed);
        let json = json!({"ok": true, "comparisons": comparisons, "seed": ctx.seed});
        Ok(CmdOutput { text, json, dot: no_dot() })
    }
}
