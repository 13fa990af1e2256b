//! Process-wide, append-only registry of coefficient variables.
//!
//! Index 0 is always `q` and index 1 is always `t`. Further variables are
//! appended on first use and keep their index for the rest of the session,
//! so exponent vectors have a stable layout.

use std::sync::{LazyLock, RwLock};

use crate::error::{Error, Result};

/// Index of a registered coefficient variable.
pub type Var = usize;

pub const Q: Var = 0;
pub const T: Var = 1;

struct Registry {
    names: Vec<String>,
    small: Vec<bool>,
}

static REGISTRY: LazyLock<RwLock<Registry>> = LazyLock::new(|| {
    RwLock::new(Registry {
        names: vec!["q".to_string(), "t".to_string()],
        small: vec![false, false],
    })
});

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Returns the index of `name`, registering it if needed.
pub fn var(name: &str) -> Result<Var> {
    if let Some(i) = lookup(name) {
        return Ok(i);
    }
    if !valid_name(name) {
        return Err(Error::InvalidVariable(name.to_string()));
    }
    let mut reg = REGISTRY.write().expect("registry poisoned");
    if let Some(i) = reg.names.iter().position(|n| n == name) {
        return Ok(i);
    }
    reg.names.push(name.to_string());
    reg.small.push(false);
    Ok(reg.names.len() - 1)
}

/// Registers `name` (if new) and marks it as a small variable, i.e. one that
/// counts towards the truncation degree of graded series.
pub fn declare_small(name: &str) -> Result<Var> {
    if name == "q" || name == "t" {
        return Err(Error::InvalidVariable(format!(
            "{name} cannot be declared small"
        )));
    }
    let v = var(name)?;
    REGISTRY.write().expect("registry poisoned").small[v] = true;
    Ok(v)
}

pub fn lookup(name: &str) -> Option<Var> {
    let reg = REGISTRY.read().expect("registry poisoned");
    reg.names.iter().position(|n| n == name)
}

pub fn name(v: Var) -> String {
    REGISTRY.read().expect("registry poisoned").names[v].clone()
}

pub fn is_small(v: Var) -> bool {
    REGISTRY
        .read()
        .expect("registry poisoned")
        .small
        .get(v)
        .copied()
        .unwrap_or(false)
}

/// Snapshot of the small-variable flags, indexed by variable.
pub fn small_mask() -> Vec<bool> {
    REGISTRY.read().expect("registry poisoned").small.clone()
}

/// Snapshot of all registered names in index order.
pub fn names() -> Vec<String> {
    REGISTRY.read().expect("registry poisoned").names.clone()
}

pub fn len() -> usize {
    REGISTRY.read().expect("registry poisoned").names.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_and_t_are_fixed() {
        assert_eq!(var("q").unwrap(), Q);
        assert_eq!(var("t").unwrap(), T);
        assert_eq!(name(Q), "q");
    }

    #[test]
    fn registration_is_stable() {
        let a = var("reg_test_a").unwrap();
        let b = var("reg_test_a").unwrap();
        assert_eq!(a, b);
        assert!(a >= 2);
    }

    #[test]
    fn rejects_bad_names() {
        assert!(var("X").is_err());
        assert!(var("1u").is_err());
        assert!(declare_small("q").is_err());
    }
}
