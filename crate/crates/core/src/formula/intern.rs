//! Process-global atom interner.
//!
//! Atoms are identified by a dense `u32` id. Interning the same name twice
//! yields the same id, so atom equality is id equality. The table only ever
//! grows; insertions are serialized behind an `RwLock`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use super::{FormulaError, RESERVED_WORDS};

#[derive(Default)]
struct Table {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

fn table() -> &'static RwLock<Table> {
    static TABLE: OnceLock<RwLock<Table>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Table::default()))
}

fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Interns `name`, returning its dense id.
pub(super) fn intern(name: &str) -> Result<u32, FormulaError> {
    if !is_valid_name(name) {
        return Err(FormulaError::InvalidName(name.to_string()));
    }
    if RESERVED_WORDS.contains(&name) {
        return Err(FormulaError::ReservedName(name.to_string()));
    }
    {
        let t = table().read().expect("atom table poisoned");
        if let Some(&id) = t.ids.get(name) {
            return Ok(id);
        }
    }
    let mut t = table().write().expect("atom table poisoned");
    if let Some(&id) = t.ids.get(name) {
        return Ok(id);
    }
    let id = u32::try_from(t.names.len()).expect("atom table overflow");
    t.names.push(name.to_string());
    t.ids.insert(name.to_string(), id);
    Ok(id)
}

pub(super) fn name_of(id: u32) -> String {
    let t = table().read().expect("atom table poisoned");
    t.names[id as usize].clone()
}
