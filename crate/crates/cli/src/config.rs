//! Flat `key = value` config files, merged under the command-line flags.

use std::collections::BTreeMap;

use clap::{ArgAction, Command};
use semigroup_ergodic::semigroup::parse_key_values;

/// Rewrites `args` so that every config key not already given as a flag
/// becomes `--key=value` after the subcommand. A `command` key supplies the
/// subcommand when the command line has none.
pub fn merge(cmd: &mut Command, args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let mut map: BTreeMap<String, String> = parse_key_values(&text).map_err(|e| format!("config {path}: {e}"))?;
    cmd.build();
    let names: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    let mut args = args;
    let mut pos = args.iter().position(|a| names.contains(a));
    let command = map.remove("command");
    if pos.is_none() {
        let name = command.ok_or("config has no `command` and none was given")?;
        if !names.contains(&name) {
            return Err(format!("config names unknown command `{name}`"));
        }
        args.push(name);
        pos = Some(args.len() - 1);
    }
    let pos = pos.expect("set above");
    let sub = cmd.find_subcommand(&args[pos]).expect("known subcommand").clone();
    let mut insert = Vec::new();
    for (key, value) in map {
        let flag = format!("--{key}");
        if args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}="))) {
            continue;
        }
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| format!("config key `{key}` is not a flag of `{}`", sub.get_name()))?;
        if arg.get_action().takes_values() {
            insert.push(format!("{flag}={value}"));
        } else if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" | "1" | "yes" => insert.push(flag),
                "false" | "0" | "no" => {}
                _ => return Err(format!("config key `{key}` expects true or false")),
            }
        }
    }
    args.splice(pos + 1..pos + 1, insert);
    Ok(args)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}
