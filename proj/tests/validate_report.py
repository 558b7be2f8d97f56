"""Validates bkscheck JSON reports against the shipped schema."""

import json
import subprocess
import sys

import jsonschema


def main() -> int:
    tool, schema_path, *inputs = sys.argv[1:]
    with open(schema_path, encoding="utf-8") as fh:
        schema = json.load(fh)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for name in inputs:
        out = subprocess.run([tool, "check", name, "--format", "json"], capture_output=True, text=True, check=True)
        errors = list(validator.iter_errors(json.loads(out.stdout)))
        for err in errors:
            print(f"{name}: {'/'.join(map(str, err.absolute_path))}: {err.message}")
        print(f"{name}: {'valid' if not errors else 'INVALID'}")
        failures += bool(errors)
        broken = json.loads(out.stdout)
        broken.pop("provenance")
        broken["classical"]["support_size"] = -1
        if validator.is_valid(broken):
            print(f"{name}: schema accepted a broken report")
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
