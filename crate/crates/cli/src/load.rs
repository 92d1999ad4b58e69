//! Loading algebra presentations from TOML files and coefficient-module
//! descriptors from the command line.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use lieconf_core::conformal::AlgebraSpec;
use lieconf_core::modules::{Binding, ModuleSpec};
use lieconf_core::parse::{parse_element, parse_poly};
use lieconf_core::vars::Var;
use lieconf_core::{Algebra, Module, Rat};

#[derive(Deserialize)]
struct AlgebraFile {
    preset: String,
    #[serde(default)]
    has_center: bool,
    #[serde(default)]
    bracket: Vec<BracketEntry>,
}

#[derive(Deserialize)]
struct BracketEntry {
    i: usize,
    j: usize,
    value: String,
}

/// Load an algebra spec file. Preset files carry `preset = "block"` etc.;
/// custom files list `[[bracket]]` entries in the element syntax.
pub fn load_algebra_file(path: &Path) -> Result<Algebra> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read spec file {}", path.display()))?;
    let file: AlgebraFile = toml::from_str(&text)
        .with_context(|| format!("malformed spec file {}", path.display()))?;
    match file.preset.as_str() {
        "block" => Ok(AlgebraSpec::block()),
        "virasoro" => Ok(AlgebraSpec::virasoro()),
        "block-central" => Ok(AlgebraSpec::block_central()),
        "custom" => {
            let mut table = BTreeMap::new();
            for entry in &file.bracket {
                let value = parse_element::<Rat>(&entry.value).map_err(|e| {
                    anyhow!(
                        "bracket entry (i={}, j={}): {} in value {:?}",
                        entry.i,
                        entry.j,
                        e,
                        entry.value
                    )
                })?;
                if table.insert((entry.i, entry.j), value).is_some() {
                    bail!("duplicate bracket entry for (i={}, j={})", entry.i, entry.j);
                }
            }
            Ok(AlgebraSpec::custom(table, file.has_center)?)
        }
        other => bail!("unknown preset {other:?} (expected block, virasoro, block-central or custom)"),
    }
}

pub fn algebra_from_preset(name: &str) -> Result<Algebra> {
    match name {
        "block" => Ok(AlgebraSpec::block()),
        "virasoro" => Ok(AlgebraSpec::virasoro()),
        "block-central" => Ok(AlgebraSpec::block_central()),
        other => bail!("unknown preset {other:?}"),
    }
}

fn parse_binding(text: &str, symbol: Var) -> Result<Binding<Rat>> {
    let t = text.trim();
    if t == "symbolic" || t == symbol.to_string() {
        return Ok(Binding::Symbolic);
    }
    let p = parse_poly::<Rat>(t).map_err(|e| anyhow!("bad parameter value {t:?}: {e}"))?;
    if p.total_degree() > 0 {
        bail!("parameter value {t:?} must be a rational or \"symbolic\"");
    }
    Ok(Binding::Value(p.constant_term()))
}

/// Parse a coefficient-module descriptor:
/// `trivial`, `c_a:a=<rat|symbolic>`, or `m:delta=<..>,alpha=<..>`.
pub fn parse_coeff(text: &str) -> Result<Module> {
    let t = text.trim();
    if t == "trivial" {
        return Ok(ModuleSpec::trivial());
    }
    if let Some(rest) = t.strip_prefix("c_a:") {
        let mut a = None;
        for part in rest.split(',') {
            match part.split_once('=') {
                Some(("a", v)) => a = Some(parse_binding(v, Var::ParamA)?),
                _ => bail!("bad c_a parameter {part:?} (expected a=<rational|symbolic>)"),
            }
        }
        return Ok(ModuleSpec::constant_a(a.ok_or_else(|| anyhow!("c_a needs a=<value>"))?));
    }
    if let Some(rest) = t.strip_prefix("m:") {
        let mut delta = None;
        let mut alpha = None;
        for part in rest.split(',') {
            match part.split_once('=') {
                Some(("delta", v)) => delta = Some(parse_binding(v, Var::Delta)?),
                Some(("alpha", v)) => alpha = Some(parse_binding(v, Var::Alpha)?),
                _ => bail!("bad module parameter {part:?} (expected delta=… or alpha=…)"),
            }
        }
        return Ok(ModuleSpec::free_rank1(
            delta.ok_or_else(|| anyhow!("m needs delta=<value>"))?,
            alpha.ok_or_else(|| anyhow!("m needs alpha=<value>"))?,
        ));
    }
    bail!("unknown coefficient module {t:?} (expected trivial, c_a:a=…, or m:delta=…,alpha=…)")
}
