use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use super::path::KeyPath;
use super::schema::ValueSpec;
use super::value::{Mapping, Object, Value};
use super::SymbolicError;

/// Body of a functor: receives the fully bound arguments in declaration order.
pub type FunctorBody = Arc<dyn Fn(&Mapping) -> Result<Value, SymbolicError> + Send + Sync>;

/// Invoked on an object after a rebind changed something beneath it.
pub type RecomputeHook = Arc<dyn Fn(&Object) + Send + Sync>;

#[derive(Clone, Debug)]
pub struct ParamDef {
    name: String,
    spec: ValueSpec,
    default: Option<Value>,
}

impl ParamDef {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &ValueSpec {
        &self.spec
    }

    pub fn default(&self) -> Option<&Value> {
        self.default.as_ref()
    }
}

/// Schema of a symbolic type: its name and ordered, constrained parameters.
#[derive(Clone)]
pub struct TypeDef {
    name: String,
    params: Vec<ParamDef>,
    body: Option<FunctorBody>,
    recompute_hook: Option<RecomputeHook>,
}

impl TypeDef {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: Vec::new(),
            body: None,
            recompute_hook: None,
        }
    }

    pub fn param(mut self, name: impl Into<String>, spec: ValueSpec) -> Self {
        self.params.push(ParamDef {
            name: name.into(),
            spec,
            default: None,
        });
        self
    }

    pub fn param_with_default(
        mut self,
        name: impl Into<String>,
        spec: ValueSpec,
        default: Value,
    ) -> Self {
        self.params.push(ParamDef {
            name: name.into(),
            spec,
            default: Some(default),
        });
        self
    }

    /// Makes this type a functor: objects may be called, and parameters may stay unbound
    /// until call time.
    pub fn functor(
        mut self,
        body: impl Fn(&Mapping) -> Result<Value, SymbolicError> + Send + Sync + 'static,
    ) -> Self {
        self.body = Some(Arc::new(body));
        self
    }

    pub fn on_recompute(mut self, hook: impl Fn(&Object) + Send + Sync + 'static) -> Self {
        self.recompute_hook = Some(Arc::new(hook));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[ParamDef] {
        &self.params
    }

    pub fn param_def(&self, name: &str) -> Option<&ParamDef> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn is_functor(&self) -> bool {
        self.body.is_some()
    }

    pub(crate) fn recompute_hook(&self) -> Option<&RecomputeHook> {
        self.recompute_hook.as_ref()
    }

    fn validate(&self) -> Result<(), SymbolicError> {
        if !super::path::is_identifier(&self.name) {
            return Err(SymbolicError::InvalidSpec(format!(
                "type name {:?} is not an identifier",
                self.name
            )));
        }
        let mut seen = HashSet::new();
        for param in &self.params {
            super::check_mapping_key(&param.name)
                .map_err(|e| SymbolicError::InvalidSpec(e.to_string()))?;
            if !seen.insert(param.name.as_str()) {
                return Err(SymbolicError::InvalidSpec(format!(
                    "duplicate parameter {:?} in {}",
                    param.name, self.name
                )));
            }
            param.spec.validate_definition()?;
            if let Some(default) = &param.default {
                param
                    .spec
                    .check(default, &KeyPath::root().child(param.name.as_str()))
                    .map_err(|e| SymbolicError::InvalidSpec(format!("bad default: {e}")))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TypeDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TypeDef")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("functor", &self.is_functor())
            .finish()
    }
}

/// Handle returned by registration; constructs objects of one type.
#[derive(Clone, Debug)]
pub struct TypeHandle {
    def: Arc<TypeDef>,
}

impl TypeHandle {
    pub fn def(&self) -> &Arc<TypeDef> {
        &self.def
    }

    pub fn name(&self) -> &str {
        self.def.name()
    }

    /// Constructs an object from keyword arguments.
    pub fn create<K, I>(&self, fields: I) -> Result<Value, SymbolicError>
    where
        K: Into<String>,
        I: IntoIterator<Item = (K, Value)>,
    {
        new_object(
            &self.def,
            fields.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        )
    }

    /// Constructs an object from positional arguments in declaration order.
    pub fn positional(&self, args: Vec<Value>) -> Result<Value, SymbolicError> {
        if args.len() > self.def.params.len() {
            return Err(SymbolicError::UnknownField {
                type_name: self.def.name.clone(),
                field: format!("<positional #{}>", args.len() - 1),
            });
        }
        let fields = self
            .def
            .params
            .iter()
            .zip(args)
            .map(|(p, v)| (p.name.clone(), v))
            .collect();
        new_object(&self.def, fields)
    }
}

pub(crate) fn new_object(def: &Arc<TypeDef>, mut given: Mapping) -> Result<Value, SymbolicError> {
    let mut fields = Mapping::with_capacity(def.params.len());
    for param in &def.params {
        let value = match given.shift_remove(&param.name) {
            Some(v) => v,
            None => match &param.default {
                Some(d) => d.clone(),
                None if def.is_functor() => continue,
                None => {
                    return Err(SymbolicError::MissingRequiredField {
                        type_name: def.name.clone(),
                        field: param.name.clone(),
                    })
                }
            },
        };
        param
            .spec
            .check(&value, &KeyPath::root().child(param.name.as_str()))?;
        fields.insert(param.name.clone(), value);
    }
    if let Some((field, _)) = given.into_iter().next() {
        return Err(SymbolicError::UnknownField {
            type_name: def.name.clone(),
            field,
        });
    }
    Ok(Value::Object(Object {
        def: Arc::clone(def),
        fields,
    }))
}

impl Object {
    /// Calls a functor, binding `args` on top of the already bound fields.
    ///
    /// Rebinding an already bound parameter is an error unless `override_args` is set.
    pub fn call<K, I>(&self, args: I, override_args: bool) -> Result<Value, SymbolicError>
    where
        K: Into<String>,
        I: IntoIterator<Item = (K, Value)>,
    {
        let body = self
            .def
            .body
            .as_ref()
            .ok_or_else(|| SymbolicError::NotCallable(self.def.name.clone()))?;
        let mut bound = self.fields.clone();
        for (name, value) in args {
            let name = name.into();
            let param = self
                .def
                .param_def(&name)
                .ok_or_else(|| SymbolicError::UnknownField {
                    type_name: self.def.name.clone(),
                    field: name.clone(),
                })?;
            if bound.contains_key(&name) && !override_args {
                return Err(SymbolicError::ArgumentConflict {
                    type_name: self.def.name.clone(),
                    field: name,
                });
            }
            param
                .spec
                .check(&value, &KeyPath::root().child(name.as_str()))?;
            bound.insert(name, value);
        }
        let mut ordered = Mapping::with_capacity(self.def.params.len());
        for param in &self.def.params {
            match bound.shift_remove(&param.name) {
                Some(v) => {
                    ordered.insert(param.name.clone(), v);
                }
                None => {
                    return Err(SymbolicError::UnboundArgument {
                        type_name: self.def.name.clone(),
                        field: param.name.clone(),
                    })
                }
            }
        }
        body(&ordered)
    }
}

/// Registry of symbolic types, keyed by unique type name.
///
/// Registration happens during setup; afterwards the registry is only read.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    types: IndexMap<String, Arc<TypeDef>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, def: TypeDef) -> Result<TypeHandle, SymbolicError> {
        if self.types.contains_key(&def.name) {
            return Err(SymbolicError::DuplicateTypeName(def.name));
        }
        def.validate()?;
        let def = Arc::new(def);
        self.types.insert(def.name.clone(), Arc::clone(&def));
        Ok(TypeHandle { def })
    }

    pub fn lookup(&self, type_name: &str) -> Result<TypeHandle, SymbolicError> {
        self.types
            .get(type_name)
            .map(|def| TypeHandle {
                def: Arc::clone(def),
            })
            .ok_or_else(|| SymbolicError::UnknownType(type_name.to_string()))
    }

    pub fn new_object<K, I>(&self, type_name: &str, fields: I) -> Result<Value, SymbolicError>
    where
        K: Into<String>,
        I: IntoIterator<Item = (K, Value)>,
    {
        self.lookup(type_name)?.create(fields)
    }

    pub fn contains(&self, type_name: &str) -> bool {
        self.types.contains_key(type_name)
    }

    pub fn type_names(&self) -> impl Iterator<Item = &str> {
        self.types.keys().map(String::as_str)
    }
}
