use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PenmanError;

const INVERSE_SUFFIX: &str = "-of";

/// An edge label, stored without its leading colon.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Role(String);

impl Role {
    pub const INSTANCE: &'static str = "instance";

    /// Builds a role from a label, with or without the leading colon.
    pub fn new(label: impl AsRef<str>) -> Self {
        let label = label.as_ref();
        Role(label.strip_prefix(':').unwrap_or(label).to_owned())
    }

    pub fn instance() -> Self {
        Role(Self::INSTANCE.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_instance(&self) -> bool {
        self.0 == Self::INSTANCE
    }

    /// Whether the label carries an inversion under the default registry.
    pub fn is_inverted(&self) -> bool {
        RoleRegistry::default().is_inverted(self)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, ":{}", self.0)
    }
}

/// Roles exempt from the `-of` inversion rule.
///
/// A role is invertible when neither it nor its `-of` toggle is registered,
/// which keeps inversion an involution on everything it accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleRegistry {
    non_invertible: BTreeSet<String>,
}

impl Default for RoleRegistry {
    fn default() -> Self {
        RoleRegistry {
            non_invertible: [Role::INSTANCE.to_owned()].into_iter().collect(),
        }
    }
}

impl RoleRegistry {
    /// The default registry extended with `labels`.
    pub fn with_non_invertible<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut registry = RoleRegistry::default();
        for label in labels {
            registry.non_invertible.insert(Role::new(label).0);
        }
        registry
    }

    pub fn is_registered(&self, role: &Role) -> bool {
        self.non_invertible.contains(role.as_str())
    }

    pub fn is_inverted(&self, role: &Role) -> bool {
        role.0.ends_with(INVERSE_SUFFIX) && !self.is_registered(role)
    }

    pub fn is_invertible(&self, role: &Role) -> bool {
        !self.is_registered(role)
            && toggle(self, role)
                .map(|inverse| !self.is_registered(&inverse))
                .unwrap_or(false)
    }

    pub fn invert(&self, role: &Role) -> Result<Role, PenmanError> {
        if !self.is_invertible(role) {
            return Err(PenmanError::NonInvertibleRole(role.0.clone()));
        }
        toggle(self, role).ok_or_else(|| PenmanError::NonInvertibleRole(role.0.clone()))
    }
}

fn toggle(registry: &RoleRegistry, role: &Role) -> Option<Role> {
    if registry.is_inverted(role) {
        let base = &role.0[..role.0.len() - INVERSE_SUFFIX.len()];
        (!base.is_empty()).then(|| Role(base.to_owned()))
    } else {
        Some(Role(format!("{}{}", role.0, INVERSE_SUFFIX)))
    }
}

/// Toggles the `-of` suffix using the default registry.
pub fn invert_role(role: &Role) -> Result<Role, PenmanError> {
    RoleRegistry::default().invert(role)
}
