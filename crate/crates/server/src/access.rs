//! Who may do what.

use edupack_core::store::Role;
use edupack_core::LanguageCode;
use serde::Serialize;

use crate::token::Claims;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Principal {
    Anonymous,
    /// The `X-Teacher-Mode: true` opt-in. Not a credential.
    TeacherMode,
    Authenticated(Claims),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    ReadLearnerContent,
    ReadPedagogicalSupport,
    ReadAuthoring,
    WriteSource,
    WriteVariant,
    AddLanguage,
    ManageUsers,
    ImportPack,
    ExportPack,
    ReadReports,
}

impl Action {
    pub const ALL: [Action; 10] = [
        Action::ReadLearnerContent,
        Action::ReadPedagogicalSupport,
        Action::ReadAuthoring,
        Action::WriteSource,
        Action::WriteVariant,
        Action::AddLanguage,
        Action::ManageUsers,
        Action::ImportPack,
        Action::ExportPack,
        Action::ReadReports,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Allow,
    /// 401: credentials are required.
    Unauthenticated,
    /// 403: the caller is known (or could switch on teacher mode) but is not
    /// allowed.
    Forbidden,
}

/// Who may perform an action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub anonymous: bool,
    pub teacher_mode: bool,
    pub roles: &'static [Role],
    /// Translators only within their granted locales.
    pub grant_scoped: bool,
}

const EVERY_ROLE: &[Role] = &[Role::Admin, Role::Designer, Role::Translator];
const AUTHORS: &[Role] = &[Role::Admin, Role::Designer];
const ADMIN: &[Role] = &[Role::Admin];

pub struct RoleMatrix;

impl RoleMatrix {
    pub const fn rule(action: Action) -> Rule {
        let (anonymous, teacher_mode, roles, grant_scoped) = match action {
            Action::ReadLearnerContent => (true, true, EVERY_ROLE, false),
            Action::ReadPedagogicalSupport => (false, true, EVERY_ROLE, false),
            Action::ReadAuthoring | Action::ExportPack | Action::ReadReports => (false, false, EVERY_ROLE, false),
            Action::WriteSource => (false, false, AUTHORS, false),
            Action::WriteVariant => (false, false, EVERY_ROLE, true),
            Action::AddLanguage | Action::ManageUsers | Action::ImportPack => (false, false, ADMIN, false),
        };
        Rule {
            anonymous,
            teacher_mode,
            roles,
            grant_scoped,
        }
    }

    /// `locale` is the target locale of a variant write.
    pub fn decide(principal: &Principal, action: Action, locale: Option<&LanguageCode>) -> Decision {
        let rule = Self::rule(action);
        match principal {
            Principal::Anonymous if rule.anonymous => Decision::Allow,
            Principal::TeacherMode if rule.anonymous || rule.teacher_mode => Decision::Allow,
            // The teacher surface is opened by the toggle, not by logging in.
            Principal::Anonymous if rule.teacher_mode => Decision::Forbidden,
            Principal::Anonymous | Principal::TeacherMode => Decision::Unauthenticated,
            Principal::Authenticated(claims) => {
                if !rule.roles.contains(&claims.role) {
                    return Decision::Forbidden;
                }
                if rule.grant_scoped && claims.role == Role::Translator {
                    let granted = locale.is_some_and(|l| claims.grants.contains(l));
                    if !granted {
                        return Decision::Forbidden;
                    }
                }
                Decision::Allow
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn user(role: Role, grants: &[&str]) -> Principal {
        Principal::Authenticated(Claims {
            sub: "u".into(),
            role,
            grants: grants
                .iter()
                .map(|g| LanguageCode::parse(g).unwrap())
                .collect::<BTreeSet<_>>(),
            exp: u64::MAX,
        })
    }

    #[test]
    fn translator_is_scoped_to_grants() {
        let es = LanguageCode::parse("es").unwrap();
        let fr = LanguageCode::parse("fr").unwrap();
        let t = user(Role::Translator, &["es"]);
        assert_eq!(RoleMatrix::decide(&t, Action::WriteVariant, Some(&es)), Decision::Allow);
        assert_eq!(
            RoleMatrix::decide(&t, Action::WriteVariant, Some(&fr)),
            Decision::Forbidden
        );
        assert_eq!(RoleMatrix::decide(&t, Action::WriteSource, None), Decision::Forbidden);
        let d = user(Role::Designer, &[]);
        assert_eq!(RoleMatrix::decide(&d, Action::WriteVariant, Some(&fr)), Decision::Allow);
    }

    #[test]
    fn open_and_teacher_surfaces() {
        assert_eq!(
            RoleMatrix::decide(&Principal::Anonymous, Action::ReadLearnerContent, None),
            Decision::Allow
        );
        assert_eq!(
            RoleMatrix::decide(&Principal::Anonymous, Action::ReadPedagogicalSupport, None),
            Decision::Forbidden
        );
        assert_eq!(
            RoleMatrix::decide(&Principal::TeacherMode, Action::ReadPedagogicalSupport, None),
            Decision::Allow
        );
        assert_eq!(
            RoleMatrix::decide(&Principal::TeacherMode, Action::WriteSource, None),
            Decision::Unauthenticated
        );
    }
}
