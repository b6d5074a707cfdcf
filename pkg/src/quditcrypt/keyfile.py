"""Line-oriented key-file serialization.

UTF-8 text, ``key = value`` lines under ``[section]`` headers, integers in
exact decimal and reals with 17 significant digits (enough to round-trip
binary64 exactly). The version line comes first; field order is fixed by
the writer. Stage sections record the digit-group split alongside the keyed
map variants, so a hand-chosen split travels with the key.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from .baker import BakerPartition, is_admissible
from .cipher import KeyFile, KeyMaterialError, SchemePlan, ScrambleStage
from .presets import plan_from_params

FORMAT_VERSION = 1


def _fmt_real(v: float) -> str:
    return format(float(v), ".17g")


def _fmt_ints(values) -> str:
    return " ".join(str(int(v)) for v in values)


def _control_label(combo: tuple[int, ...]) -> str:
    return "_".join(str(v) for v in combo) if combo else "-"


def _parse_control_label(label: str) -> tuple[int, ...]:
    return () if label == "-" else tuple(int(v) for v in label.split("_"))


def _system_sort_key(label: str):
    kind, _, index = label.partition(".")
    return (kind, int(index) if index else 0)


def write_key_text(plan: SchemePlan, key: KeyFile) -> str:
    lines = [f"version = {key.version}", f"preset = {key.preset_name}"]
    for name, value in plan.params:
        lines.append(f"param.{name} = {value}")
    if key.f_param is not None:
        lines.append(f"f = {_fmt_real(key.f_param)}")
    if key.image_count is not None:
        lines.append(f"images = {key.image_count}")
    if key.seeds is not None:
        for label in sorted(key.seeds, key=_system_sort_key):
            lines.append(f"seed.{label} = " + " ".join(_fmt_real(v) for v in key.seeds[label]))
    for i, (stage, table) in enumerate(zip(plan.stages, key.stage_keys)):
        lines.append(f"[stage.{i}]")
        lines.append(f"left = {_fmt_ints(stage.left)}")
        lines.append(f"right = {_fmt_ints(stage.right)}")
        lines.append(f"controls = {_fmt_ints(stage.controls)}")
        for combo in sorted(table):
            partition, iterations = table[combo]
            label = _control_label(combo)
            lines.append(f"key.{label}.partition = {_fmt_ints(partition.parts)}")
            lines.append(f"key.{label}.iterations = {iterations}")
    for label in sorted(key.lambdas, key=_system_sort_key):
        lines.append(f"[system.{label}]")
        lines.append("lambda = " + " ".join(_fmt_real(v) for v in key.lambdas[label]))
    return "\n".join(lines) + "\n"


def save_key(path, plan: SchemePlan, key: KeyFile) -> None:
    Path(path).write_text(write_key_text(plan, key), encoding="utf-8")


def _split_line(line: str, where: str) -> tuple[str, str]:
    if "=" not in line:
        raise KeyMaterialError(f"malformed key line in {where}: {line!r}")
    name, _, value = line.partition("=")
    return name.strip(), value.strip()


def parse_key_text(text: str) -> tuple[SchemePlan, KeyFile]:
    """Rebuild the plan and key material from key-file text.

    The plan comes from the recorded preset parameters, with the stage digit
    split taken from the file itself so an edited split stays in force.
    """
    header: dict[str, str] = {}
    sections: list[tuple[str, dict[str, str]]] = []
    current = header
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            sections.append((line[1:-1], {}))
            current = sections[-1][1]
            continue
        name, value = _split_line(line, "key file")
        current[name] = value

    if header.get("version") != str(FORMAT_VERSION):
        raise KeyMaterialError(f"unsupported key file version {header.get('version')!r}")
    preset_name = header.get("preset")
    if not preset_name:
        raise KeyMaterialError("key file lacks a preset line")
    params = {
        name[len("param."):]: int(value)
        for name, value in header.items()
        if name.startswith("param.")
    }
    plan = plan_from_params(preset_name, params)

    seeds: dict[str, tuple[float, ...]] = {}
    for name, value in header.items():
        if name.startswith("seed."):
            seeds[name[len("seed."):]] = tuple(float(v) for v in value.split())
    image_count = int(header["images"]) if "images" in header else None
    f_param = float(header["f"]) if "f" in header else None

    stage_sections = [(name, body) for name, body in sections if name.startswith("stage.")]
    stage_sections.sort(key=lambda item: int(item[0].split(".")[1]))
    stages: list[ScrambleStage] = []
    stage_keys: list[dict[tuple[int, ...], tuple[BakerPartition, int]]] = []
    radix = plan.layout.radix
    for name, body in stage_sections:
        try:
            stage = ScrambleStage(
                left=tuple(int(v) for v in body["left"].split()),
                right=tuple(int(v) for v in body["right"].split()),
                controls=tuple(int(v) for v in body.get("controls", "").split()),
            )
            table: dict[tuple[int, ...], tuple[BakerPartition, int]] = {}
            labels = {
                key.split(".", 2)[1]
                for key in body
                if key.startswith("key.") and key.endswith(".partition")
            }
            for label in labels:
                parts = tuple(int(v) for v in body[f"key.{label}.partition"].split())
                iterations = int(body[f"key.{label}.iterations"])
                partition = BakerPartition(radix, len(stage.left), parts)
                if not is_admissible(partition):
                    raise KeyMaterialError(f"stage {name}: partition {parts} is not admissible")
                table[_parse_control_label(label)] = (partition, iterations)
        except KeyError as exc:
            raise KeyMaterialError(f"stage section {name} lacks field {exc}") from None
        stages.append(stage)
        stage_keys.append(table)
    if len(stages) != len(plan.stages):
        raise KeyMaterialError(
            f"key file has {len(stages)} stages, preset {preset_name!r} expects {len(plan.stages)}"
        )
    plan = replace(plan, stages=tuple(stages))

    lambdas: dict[str, tuple[float, ...]] = {}
    for name, body in sections:
        if name.startswith("system."):
            lambdas[name[len("system."):]] = tuple(float(v) for v in body["lambda"].split())

    key = KeyFile(
        preset_name=preset_name,
        preset_params=params,
        stage_keys=stage_keys,
        lambdas=lambdas,
        f_param=f_param,
        seeds=seeds or None,
        image_count=image_count,
        version=FORMAT_VERSION,
    )
    return plan, key


def load_key(path) -> tuple[SchemePlan, KeyFile]:
    return parse_key_text(Path(path).read_text(encoding="utf-8"))
