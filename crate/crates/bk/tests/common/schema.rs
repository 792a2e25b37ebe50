//! A small JSON Schema interpreter covering the subset the published
//! report schema uses: `type`, `enum`, `properties`, `required`,
//! `additionalProperties`, `items`, `oneOf` and local `$ref`.

use serde_json::Value;

pub fn validate(value: &Value, schema: &Value, root: &Value) -> Result<(), String> {
    let schema = deref(schema, root)?;

    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let mut matches = 0;
        let mut errors = Vec::new();
        for option in options {
            match validate(value, option, root) {
                Ok(()) => matches += 1,
                Err(e) => errors.push(e),
            }
        }
        if matches != 1 {
            return Err(format!(
                "oneOf matched {matches} alternatives (want exactly 1): [{}]",
                errors.join("; ")
            ));
        }
        return Ok(());
    }

    if let Some(expected) = schema.get("type") {
        check_type(value, expected)?;
    }

    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            return Err(format!("{value} is not one of {allowed:?}"));
        }
    }

    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        if let Some(object) = value.as_object() {
            for (key, sub) in props {
                if let Some(v) = object.get(key) {
                    validate(v, sub, root).map_err(|e| format!("{key}: {e}"))?;
                }
            }
            match schema.get("additionalProperties") {
                Some(Value::Bool(false)) => {
                    for key in object.keys() {
                        if !props.contains_key(key) {
                            return Err(format!("unexpected property `{key}`"));
                        }
                    }
                }
                Some(Value::Bool(true)) | None => {}
                Some(sub) => {
                    for (key, v) in object {
                        if !props.contains_key(key) {
                            validate(v, sub, root).map_err(|e| format!("{key}: {e}"))?;
                        }
                    }
                }
            }
        }
    } else if let Some(sub) = schema.get("additionalProperties") {
        if let Some(object) = value.as_object() {
            if let Value::Bool(false) = sub {
                if !object.is_empty() {
                    return Err("no properties allowed".into());
                }
            } else if sub.is_object() {
                for (key, v) in object {
                    validate(v, sub, root).map_err(|e| format!("{key}: {e}"))?;
                }
            }
        }
    }

    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        let object = value
            .as_object()
            .ok_or_else(|| "required applies to objects".to_string())?;
        for key in required {
            let key = key.as_str().ok_or("required entries are strings")?;
            if !object.contains_key(key) {
                return Err(format!("missing required property `{key}`"));
            }
        }
    }

    if let Some(items) = schema.get("items") {
        if let Some(array) = value.as_array() {
            for (i, v) in array.iter().enumerate() {
                validate(v, items, root).map_err(|e| format!("[{i}]: {e}"))?;
            }
        }
    }

    Ok(())
}

fn deref<'a>(schema: &'a Value, root: &'a Value) -> Result<&'a Value, String> {
    match schema.get("$ref").and_then(Value::as_str) {
        None => Ok(schema),
        Some(path) => {
            let name = path
                .strip_prefix("#/$defs/")
                .ok_or_else(|| format!("unsupported $ref `{path}`"))?;
            root.get("$defs")
                .and_then(|d| d.get(name))
                .ok_or_else(|| format!("unresolved $ref `{path}`"))
        }
    }
}

fn check_type(value: &Value, expected: &Value) -> Result<(), String> {
    let matches = |name: &str| match name {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "integer" => value.is_i64() || value.is_u64(),
        "number" => value.is_number(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => false,
    };
    match expected {
        Value::String(name) => {
            if matches(name) {
                Ok(())
            } else {
                Err(format!("expected type {name}, got {value}"))
            }
        }
        Value::Array(names) => {
            if names.iter().filter_map(Value::as_str).any(matches) {
                Ok(())
            } else {
                Err(format!("expected one of types {names:?}, got {value}"))
            }
        }
        other => Err(format!("malformed type specifier {other}")),
    }
}
