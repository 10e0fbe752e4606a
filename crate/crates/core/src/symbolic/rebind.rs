//! Tree modification: path-keyed directives and whole-tree transforms.
//!
//! Both forms build a new tree and leave the input untouched. Every field whose
//! subtree changed is re-validated against its spec, and the recompute hook of
//! each surviving object above a change fires once per call, deepest first,
//! after the whole rebind succeeded.

use std::sync::Arc;

use indexmap::IndexMap;

use super::path::{IntoKeyPath, KeyPath, Segment};
use super::value::{Mapping, Object, Value};
use super::SymbolicError;
use crate::hyper::HyperKind;

/// What to do at one edited path.
#[derive(Clone, Debug, PartialEq)]
pub enum RebindDirective {
    /// Replace the node (or bind a new mapping key / unbound functor argument).
    Set(Value),
    /// Insert before the indexed position of a list.
    Insert(Value),
    /// Remove a list element or mapping entry.
    Delete,
}

pub fn set(value: impl Into<Value>) -> RebindDirective {
    RebindDirective::Set(value.into())
}

pub fn insert(value: impl Into<Value>) -> RebindDirective {
    RebindDirective::Insert(value.into())
}

pub fn delete() -> RebindDirective {
    RebindDirective::Delete
}

#[derive(Default, Debug)]
struct EditTree {
    directive: Option<RebindDirective>,
    children: IndexMap<Segment, EditTree>,
}

impl EditTree {
    fn insert(&mut self, path: &KeyPath, directive: RebindDirective) {
        let mut node = self;
        for segment in path.segments() {
            node = node.children.entry(segment.clone()).or_default();
        }
        node.directive = Some(directive);
    }
}

/// A rebuilt subtree plus the relative paths of objects whose hooks must fire.
struct Rebuilt {
    value: Value,
    hooks: Vec<KeyPath>,
}

impl Value {
    /// Applies path-keyed directives and returns the edited tree.
    ///
    /// All paths refer to the original tree. List directives sharing a parent are
    /// applied from the highest index down.
    pub fn rebind<P, I>(&self, edits: I) -> Result<Value, SymbolicError>
    where
        P: IntoKeyPath,
        I: IntoIterator<Item = (P, RebindDirective)>,
    {
        let mut tree = EditTree::default();
        for (path, directive) in edits {
            tree.insert(&path.into_key_path()?, directive);
        }
        let rebuilt = match tree.directive.take() {
            Some(RebindDirective::Set(value)) => {
                if !tree.children.is_empty() {
                    return Err(SymbolicError::ConflictingEdits(String::new()));
                }
                Rebuilt {
                    value,
                    hooks: Vec::new(),
                }
            }
            Some(_) => {
                return Err(SymbolicError::IllegalDirective {
                    path: String::new(),
                    reason: "cannot insert or delete the root".into(),
                })
            }
            None if tree.children.is_empty() => return Ok(self.clone()),
            None => apply_edits(self, &tree, &mut KeyPath::root())?,
        };
        fire_hooks(&rebuilt.value, &rebuilt.hooks);
        Ok(rebuilt.value)
    }

    /// Applies `transform(path, value, parent)` to every node in post-order.
    ///
    /// Returning a value equal to the input leaves the node unchanged; returned
    /// replacements are not visited again.
    pub fn rebind_with<F>(&self, mut transform: F) -> Result<Value, SymbolicError>
    where
        F: FnMut(&KeyPath, &Value, Option<&Value>) -> Value,
    {
        let (rebuilt, _) = transform_node(self, None, &mut KeyPath::root(), &mut transform)?;
        fire_hooks(&rebuilt.value, &rebuilt.hooks);
        Ok(rebuilt.value)
    }
}

fn fire_hooks(root: &Value, hooks: &[KeyPath]) {
    for path in hooks {
        if let Ok(Value::Object(object)) = root.get(path) {
            if let Some(hook) = object.def.recompute_hook() {
                hook(object);
            }
        }
    }
}

fn not_found(path: &KeyPath, segment: &Segment) -> SymbolicError {
    SymbolicError::PathNotFound(path.child(segment.clone()).to_string())
}

fn illegal(path: &KeyPath, segment: &Segment, reason: &str) -> SymbolicError {
    SymbolicError::IllegalDirective {
        path: path.child(segment.clone()).to_string(),
        reason: reason.into(),
    }
}

fn prefix_hooks(hooks: Vec<KeyPath>, segment: Segment, out: &mut Vec<KeyPath>) {
    out.extend(
        hooks
            .into_iter()
            .map(|p| p.prefixed(std::slice::from_ref(&segment))),
    );
}

/// Rebuilds `node` with the edits below it. `path` is the node's original path.
fn apply_edits(
    node: &Value,
    edits: &EditTree,
    path: &mut KeyPath,
) -> Result<Rebuilt, SymbolicError> {
    match node {
        Value::List(items) => apply_list(items, edits, path).map(|(items, hooks)| Rebuilt {
            value: Value::List(items),
            hooks,
        }),
        Value::Map(map) => apply_map(map, edits, path),
        Value::Object(object) => apply_object(object, edits, path),
        Value::Hyper(hyper) => match &hyper.kind {
            HyperKind::Choice(choice) => {
                let (candidates, hooks) = apply_indexed(choice.candidates(), edits, path, false)?;
                let mut hyper = (**hyper).clone();
                if let HyperKind::Choice(c) = &mut hyper.kind {
                    c.replace_candidates(candidates);
                }
                Ok(Rebuilt {
                    value: Value::Hyper(Box::new(hyper)),
                    hooks,
                })
            }
            _ => Err(not_found(
                path,
                edits.children.keys().next().expect("non-empty edits"),
            )),
        },
        _ => Err(not_found(
            path,
            edits.children.keys().next().expect("non-empty edits"),
        )),
    }
}

fn apply_list(
    items: &[Value],
    edits: &EditTree,
    path: &mut KeyPath,
) -> Result<(Vec<Value>, Vec<KeyPath>), SymbolicError> {
    apply_indexed(items, edits, path, true)
}

/// Edits an indexed container (a list, or the candidates of a choice when
/// `structural` is false).
fn apply_indexed(
    items: &[Value],
    edits: &EditTree,
    path: &mut KeyPath,
    structural: bool,
) -> Result<(Vec<Value>, Vec<KeyPath>), SymbolicError> {
    let mut out: Vec<Value> = items.to_vec();
    let mut nested_hooks: Vec<(usize, Vec<KeyPath>)> = Vec::new();
    let mut structure: Vec<(usize, Option<Value>)> = Vec::new();
    for (segment, sub) in &edits.children {
        let Segment::Index(i) = *segment else {
            return Err(not_found(path, segment));
        };
        match &sub.directive {
            Some(RebindDirective::Set(value)) => {
                if i >= items.len() {
                    return Err(not_found(path, segment));
                }
                if !sub.children.is_empty() {
                    return Err(SymbolicError::ConflictingEdits(path.child(i).to_string()));
                }
                out[i] = value.clone();
                continue;
            }
            Some(RebindDirective::Insert(value)) => {
                if !structural {
                    return Err(illegal(path, segment, "candidates cannot be inserted"));
                }
                if i > items.len() {
                    return Err(not_found(path, segment));
                }
                structure.push((i, Some(value.clone())));
            }
            Some(RebindDirective::Delete) => {
                if !structural {
                    return Err(illegal(path, segment, "candidates cannot be deleted"));
                }
                if i >= items.len() {
                    return Err(not_found(path, segment));
                }
                if !sub.children.is_empty() {
                    return Err(SymbolicError::ConflictingEdits(path.child(i).to_string()));
                }
                structure.push((i, None));
            }
            None => {}
        }
        if !sub.children.is_empty() {
            if i >= items.len() {
                return Err(not_found(path, segment));
            }
            path.push(i);
            let rebuilt = apply_edits(&items[i], sub, path);
            path.pop();
            let rebuilt = rebuilt?;
            out[i] = rebuilt.value;
            nested_hooks.push((i, rebuilt.hooks));
        }
    }
    // Apply from the highest original index down so indices stay valid.
    structure.sort_by_key(|entry| std::cmp::Reverse(entry.0));
    for (i, action) in &structure {
        match action {
            Some(value) => out.insert(*i, value.clone()),
            None => {
                out.remove(*i);
            }
        }
    }
    let mut hooks = Vec::new();
    for (i, nested) in nested_hooks {
        let shift_up = structure
            .iter()
            .filter(|(j, a)| a.is_some() && *j <= i)
            .count();
        let shift_down = structure
            .iter()
            .filter(|(j, a)| a.is_none() && *j < i)
            .count();
        prefix_hooks(
            nested,
            Segment::Index(i + shift_up - shift_down),
            &mut hooks,
        );
    }
    Ok((out, hooks))
}

fn apply_map(
    map: &Mapping,
    edits: &EditTree,
    path: &mut KeyPath,
) -> Result<Rebuilt, SymbolicError> {
    let mut out = map.clone();
    let mut hooks = Vec::new();
    for (segment, sub) in &edits.children {
        let Segment::Key(key) = segment else {
            return Err(not_found(path, segment));
        };
        match &sub.directive {
            Some(RebindDirective::Set(value)) => {
                if !sub.children.is_empty() {
                    return Err(SymbolicError::ConflictingEdits(
                        path.child(key.as_str()).to_string(),
                    ));
                }
                super::check_mapping_key(key)?;
                out.insert(key.clone(), value.clone());
                continue;
            }
            Some(RebindDirective::Delete) => {
                if !sub.children.is_empty() {
                    return Err(SymbolicError::ConflictingEdits(
                        path.child(key.as_str()).to_string(),
                    ));
                }
                if out.shift_remove(key).is_none() {
                    return Err(not_found(path, segment));
                }
                continue;
            }
            Some(RebindDirective::Insert(_)) => {
                return Err(illegal(path, segment, "insert requires a list parent"));
            }
            None => {}
        }
        let child = map.get(key).ok_or_else(|| not_found(path, segment))?;
        path.push(segment.clone());
        let rebuilt = apply_edits(child, sub, path);
        path.pop();
        let rebuilt = rebuilt?;
        out.insert(key.clone(), rebuilt.value);
        prefix_hooks(rebuilt.hooks, segment.clone(), &mut hooks);
    }
    Ok(Rebuilt {
        value: Value::Map(out),
        hooks,
    })
}

fn apply_object(
    object: &Object,
    edits: &EditTree,
    path: &mut KeyPath,
) -> Result<Rebuilt, SymbolicError> {
    let def = &object.def;
    let mut fields = object.fields.clone();
    let mut hooks = Vec::new();
    let mut changed = Vec::new();
    for (segment, sub) in &edits.children {
        let Segment::Key(key) = segment else {
            return Err(not_found(path, segment));
        };
        if def.param_def(key).is_none() {
            return Err(not_found(path, segment));
        }
        match &sub.directive {
            Some(RebindDirective::Set(value)) => {
                if !sub.children.is_empty() {
                    return Err(SymbolicError::ConflictingEdits(
                        path.child(key.as_str()).to_string(),
                    ));
                }
                if !fields.contains_key(key) && !def.is_functor() {
                    return Err(not_found(path, segment));
                }
                fields.insert(key.clone(), value.clone());
                changed.push(key.clone());
                continue;
            }
            Some(_) => {
                return Err(illegal(path, segment, "object fields can only be set"));
            }
            None => {}
        }
        let child = object
            .fields
            .get(key)
            .ok_or_else(|| not_found(path, segment))?;
        path.push(segment.clone());
        let rebuilt = apply_edits(child, sub, path);
        path.pop();
        let rebuilt = rebuilt?;
        fields.insert(key.clone(), rebuilt.value);
        changed.push(key.clone());
        prefix_hooks(rebuilt.hooks, segment.clone(), &mut hooks);
    }
    let object = revalidate(def, fields, &changed, path)?;
    if def.recompute_hook().is_some() {
        hooks.push(KeyPath::root());
    }
    Ok(Rebuilt {
        value: Value::Object(object),
        hooks,
    })
}

fn revalidate(
    def: &Arc<super::registry::TypeDef>,
    fields: Mapping,
    changed: &[String],
    path: &KeyPath,
) -> Result<Object, SymbolicError> {
    for key in changed {
        let param = def.param_def(key).expect("changed fields are declared");
        param
            .spec()
            .check(&fields[key.as_str()], &path.child(key.as_str()))?;
    }
    Ok(Object::from_parts(Arc::clone(def), fields))
}

fn transform_node<F>(
    node: &Value,
    parent: Option<&Value>,
    path: &mut KeyPath,
    transform: &mut F,
) -> Result<(Rebuilt, bool), SymbolicError>
where
    F: FnMut(&KeyPath, &Value, Option<&Value>) -> Value,
{
    let mut hooks = Vec::new();
    let mut changed_keys = Vec::new();
    let mut new_children: Vec<(Segment, Value)> = Vec::new();
    for (segment, child) in node.children() {
        path.push(segment.clone());
        let result = transform_node(child, Some(node), path, transform);
        path.pop();
        let (rebuilt, changed) = result?;
        if changed {
            if let Segment::Key(k) = &segment {
                changed_keys.push(k.clone());
            }
            prefix_hooks(rebuilt.hooks, segment.clone(), &mut hooks);
            new_children.push((segment, rebuilt.value));
        }
    }
    let any_changed = !new_children.is_empty();
    let updated = if any_changed {
        let mut updated = node.clone();
        match &mut updated {
            Value::List(items) => {
                for (segment, value) in new_children {
                    if let Segment::Index(i) = segment {
                        items[i] = value;
                    }
                }
            }
            Value::Map(map) => {
                for (segment, value) in new_children {
                    if let Segment::Key(k) = segment {
                        map.insert(k, value);
                    }
                }
            }
            Value::Object(object) => {
                let mut fields = object.fields.clone();
                for (segment, value) in new_children {
                    if let Segment::Key(k) = segment {
                        fields.insert(k, value);
                    }
                }
                *object = revalidate(&object.def, fields, &changed_keys, path)?;
                if object.def.recompute_hook().is_some() {
                    hooks.push(KeyPath::root());
                }
            }
            Value::Hyper(hyper) => {
                if let HyperKind::Choice(choice) = &mut hyper.kind {
                    let mut candidates = choice.candidates().to_vec();
                    for (segment, value) in new_children {
                        if let Segment::Index(i) = segment {
                            candidates[i] = value;
                        }
                    }
                    choice.replace_candidates(candidates);
                }
            }
            _ => unreachable!("leaf nodes have no children"),
        }
        updated
    } else {
        node.clone()
    };
    let replacement = transform(path, &updated, parent);
    if replacement == updated {
        Ok((
            Rebuilt {
                value: updated,
                hooks,
            },
            any_changed,
        ))
    } else {
        Ok((
            Rebuilt {
                value: replacement,
                hooks: Vec::new(),
            },
            true,
        ))
    }
}
