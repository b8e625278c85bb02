use emlab::experiment::ExperimentConfig;
use serde_json::Value;

fn schema() -> Value {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/schema/experiment_config.schema.json"
    ))
    .unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Every property default in `schema` matches `value`, recursively.
fn assert_defaults(schema: &Value, value: &Value, path: &str) {
    if let Some(d) = schema.get("default") {
        assert_eq!(d, value, "default of {path}");
    }
    if let (Some(props), Some(obj)) = (schema.get("properties").and_then(Value::as_object), value.as_object()) {
        for key in obj.keys() {
            assert!(props.contains_key(key), "{path}.{key} missing from the schema");
        }
        for (k, sub) in props {
            if let Some(v) = obj.get(k) {
                assert_defaults(sub, v, &format!("{path}.{k}"));
            }
        }
    }
}

#[test]
fn schema_defaults_match_the_loader() {
    let s = schema();
    let defaults = serde_json::to_value(ExperimentConfig::default()).unwrap();
    assert_defaults(&s, &defaults, "$");
    for key in s["properties"].as_object().unwrap().keys() {
        assert!(defaults.get(key).is_some(), "{key} not in the config type");
    }
}

#[test]
fn datum_variant_defaults_match() {
    let s = schema();
    let variants = s["properties"]["datum"]["oneOf"].as_array().unwrap();
    for v in variants {
        let kind = v["properties"]["kind"]["const"].as_str().unwrap();
        let mut datum = serde_json::json!({ "kind": kind });
        if kind == "illposed" {
            datum["n_scales"] = 2.into();
        }
        let cfg = ExperimentConfig::from_json(&serde_json::json!({ "datum": datum }).to_string()).unwrap();
        assert_defaults(v, &serde_json::to_value(&cfg.datum).unwrap(), kind);
    }
}

#[test]
fn nested_section_defaults_match() {
    let s = schema();
    let cfg = ExperimentConfig::from_json(r#"{"sweep": {"n_scales": [1]}, "limit": {"c_values": [0.1]}}"#).unwrap();
    let v = serde_json::to_value(&cfg).unwrap();
    for key in ["sweep", "limit"] {
        let mut sub = s["properties"][key].clone();
        sub.as_object_mut().unwrap().remove("default");
        assert_defaults(&sub, &v[key], key);
    }
}
