//! `--group` arguments: `zn:N`, `znxzn:N`, `dihedral:N`, `q8`, `sym:K`,
//! `trivial`, or `@path` to a Cayley table file.

use std::{fs, path::Path};

use cocycle::{format::parse_group, FiniteGroup};

pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup, String> {
  if let Some(path) = spec.strip_prefix('@') {
    let text = read_file(path)?;
    let name = Path::new(path).file_stem().and_then(|s| s.to_str()).unwrap_or(path);
    return parse_group(&text, name).map_err(|e| format!("{path}: {e}"));
  }
  let (kind, param) = match spec.split_once(':') {
    Some((k, p)) => (k, Some(p)),
    None => (spec, None),
  };
  let number = || -> Result<usize, String> {
    let p = param.ok_or_else(|| format!("group `{kind}` needs a parameter, e.g. `{kind}:3`"))?;
    p.parse().map_err(|_| format!("bad parameter `{p}` in group `{spec}`"))
  };
  let no_param = || match param {
    Some(p) => Err(format!("group `{kind}` takes no parameter, found `{p}`")),
    None => Ok(()),
  };
  let group = match kind {
    "zn" => FiniteGroup::cyclic(number()?),
    "znxzn" => FiniteGroup::cyclic(number()?).map(|z| FiniteGroup::direct_product(&z, &z)),
    "dihedral" => FiniteGroup::dihedral(number()?),
    "sym" => FiniteGroup::symmetric(number()?),
    "q8" => no_param().map(|_| Ok(FiniteGroup::quaternion8()))?,
    "trivial" => no_param().map(|_| Ok(FiniteGroup::trivial()))?,
    _ => {
      return Err(format!(
        "unknown group `{kind}` (expected zn:N, znxzn:N, dihedral:N, q8, sym:K, trivial or @file)"
      ))
    }
  };
  group.map_err(|e| format!("group `{spec}`: {e}"))
}

pub fn read_file(arg: &str) -> Result<String, String> {
  let path = arg.strip_prefix('@').unwrap_or(arg);
  fs::read_to_string(path).map_err(|e| format!("cannot read `{path}`: {e}"))
}
