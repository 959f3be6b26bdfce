//! Named expansion schemes over the number-parity group.
//!
//! Grammar: `unmit` is the identity-only scheme; `ver-full` is uniform over
//! the whole group; `ver-{a,b,...}` adds the identity to the listed
//! operators and must form a group; `exp-{a,b,...}` is a uniform expansion
//! over exactly the listed operators. Operator tokens: `up`, `down`, `tot`.

use symx::expansion::{ExpansionScheme, SymmetrySet};
use symx::hubbard::{symmetries, HubbardSymmetries, LatticeSpec};
use symx::pauli::PauliString;

use crate::error::{CliError, Result};

#[derive(Debug, Clone)]
pub struct NamedScheme {
    pub name: String,
    pub scheme: ExpansionScheme,
    /// Uniform expansions over a group are symmetry verifications; they are
    /// drawn solid in the curve plots.
    pub is_group: bool,
}

fn token_operator(token: &str, syms: &HubbardSymmetries) -> Option<PauliString> {
    match token {
        "up" => Some(syms.g_up.clone()),
        "down" => Some(syms.g_down.clone()),
        "tot" => Some(syms.g_tot.clone()),
        _ => None,
    }
}

pub fn parse_scheme(name: &str, spec: &LatticeSpec) -> Result<NamedScheme> {
    let syms = symmetries(spec);
    let n = spec.qubits();
    let elements: Vec<PauliString> = if name == "unmit" {
        vec![PauliString::identity(n)]
    } else if name == "ver-full" {
        syms.group.elements().to_vec()
    } else if let Some(body) = name.strip_prefix("ver-") {
        let mut ops = vec![PauliString::identity(n)];
        ops.extend(parse_braced(body, name, &syms)?);
        ops
    } else if let Some(body) = name.strip_prefix("exp-") {
        parse_braced(body, name, &syms)?
    } else {
        return Err(CliError::UnknownScheme(name.into()));
    };

    let set = SymmetrySet::new(elements).map_err(CliError::Core)?;
    if name.starts_with("ver") && !set.is_group() {
        return Err(CliError::NotAGroup(name.into()));
    }
    Ok(NamedScheme {
        name: name.to_string(),
        is_group: set.is_group(),
        scheme: ExpansionScheme::uniform(set),
    })
}

fn parse_braced(body: &str, name: &str, syms: &HubbardSymmetries) -> Result<Vec<PauliString>> {
    let inner = body
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| CliError::UnknownScheme(name.into()))?;
    let mut ops = Vec::new();
    for token in inner.split(',') {
        let token = token.trim();
        let op = token_operator(token, syms).ok_or_else(|| CliError::UnknownScheme(name.into()))?;
        if ops.contains(&op) {
            return Err(CliError::UnknownScheme(format!("{name} repeats '{token}'")));
        }
        ops.push(op);
    }
    if ops.is_empty() {
        return Err(CliError::UnknownScheme(name.into()));
    }
    Ok(ops)
}

pub fn parse_all(names: &[String], spec: &LatticeSpec) -> Result<Vec<NamedScheme>> {
    names.iter().map(|n| parse_scheme(n, spec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_names_parse() {
        let spec = LatticeSpec::two_by_two();
        for (name, count, group) in [
            ("unmit", 1, true),
            ("ver-full", 4, true),
            ("ver-{tot}", 2, true),
            ("ver-{up}", 2, true),
            ("exp-{down,tot}", 2, false),
            ("exp-{down}", 1, false),
            ("exp-{up,down,tot}", 3, false),
        ] {
            let parsed = parse_scheme(name, &spec).unwrap();
            assert_eq!(parsed.scheme.ops().len(), count, "{name}");
            assert_eq!(parsed.is_group, group, "{name}");
        }
    }

    #[test]
    fn bad_names_rejected() {
        let spec = LatticeSpec::two_by_two();
        assert!(matches!(
            parse_scheme("ver-{up,down}", &spec),
            Err(CliError::NotAGroup(_))
        ));
        assert!(matches!(
            parse_scheme("exp-{}", &spec),
            Err(CliError::UnknownScheme(_))
        ));
        assert!(matches!(
            parse_scheme("exp-{spin}", &spec),
            Err(CliError::UnknownScheme(_))
        ));
        assert!(matches!(
            parse_scheme("mystery", &spec),
            Err(CliError::UnknownScheme(_))
        ));
        assert!(matches!(
            parse_scheme("exp-{down,down}", &spec),
            Err(CliError::UnknownScheme(_))
        ));
    }
}
