"""Published JSON shapes for the command-line reports.

Every `--json` report validates against the schema registered here for its
verb, and nothing else is emitted; consumers can rely on these shapes.
Plain dicts, usable with any JSON-Schema validator; the library itself
never imports one.
"""

INT_VEC = {"type": "array", "items": {"type": "integer"}}
MATRIX = {"type": "array", "items": INT_VEC}

GROUP = {
    "type": "object",
    "additionalProperties": False,
    "required": ["free_rank", "torsion", "text"],
    "properties": {
        "free_rank": {"type": "integer", "minimum": 0},
        "torsion": INT_VEC,
        "text": {"type": "string"},
    },
}

FAN = {
    "type": "object",
    "additionalProperties": False,
    "required": ["rank", "rays", "max_cones"],
    "properties": {
        "rank": {"type": "integer", "minimum": 0},
        "rays": MATRIX,
        "max_cones": MATRIX,
    },
}

VALIDATE = {
    "type": "object",
    "additionalProperties": False,
    "required": ["ok", "violations"],
    "properties": {
        "ok": {"type": "boolean"},
        "violations": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["first", "second", "reason"],
                "properties": {
                    "first": INT_VEC,
                    "second": INT_VEC,
                    "reason": {"type": "string"},
                },
            },
        },
    },
}

SUBDIVIDE = {
    "type": "object",
    "additionalProperties": False,
    "required": ["fan", "star_ray"],
    "properties": {"fan": FAN, "star_ray": INT_VEC},
}

COX = {
    "type": "object",
    "additionalProperties": False,
    "required": ["group", "weights", "kernel", "primitive_collections"],
    "properties": {
        "group": GROUP,
        "weights": MATRIX,
        "kernel": MATRIX,
        "primitive_collections": MATRIX,
    },
}

_PIECE = {
    "type": "object",
    "additionalProperties": False,
    "required": ["degree", "free_rank", "torsion", "text"],
    "properties": {
        "degree": {"type": "integer", "minimum": 0},
        "free_rank": {"type": "integer", "minimum": 0},
        "torsion": INT_VEC,
        "text": {"type": "string"},
    },
}

CHOW_STACK = {
    "type": "object",
    "additionalProperties": False,
    "required": ["variables", "linear_relations", "monomial_relations",
                 "pieces"],
    "properties": {
        "variables": {"type": "integer", "minimum": 0},
        "linear_relations": MATRIX,
        "monomial_relations": MATRIX,
        "pieces": {"type": "array", "items": _PIECE},
    },
}

CHOW_GROUPS = {
    "type": "object",
    "additionalProperties": False,
    "required": ["groups"],
    "properties": {
        "groups": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["k", "free_rank", "torsion", "text"],
                "properties": {
                    "k": {"type": "integer", "minimum": 0},
                    "free_rank": {"type": "integer", "minimum": 0},
                    "torsion": INT_VEC,
                    "text": {"type": "string"},
                },
            },
        },
    },
}

_GEN_TERM = {
    "type": "object",
    "additionalProperties": False,
    "required": ["exponent", "coeff"],
    "properties": {"exponent": INT_VEC, "coeff": {"type": "integer"}},
}

KTHEORY_STACK = {
    "type": "object",
    "additionalProperties": False,
    "required": ["group", "generator_images", "ideal_gens",
                 "ideal_gens_text"],
    "properties": {
        "group": GROUP,
        "generator_images": MATRIX,
        "ideal_gens": {
            "type": "array",
            "items": {"type": "array", "items": _GEN_TERM},
        },
        "ideal_gens_text": {"type": "array", "items": {"type": "string"}},
    },
}

VERIFY_VANISHING = {
    "type": "object",
    "additionalProperties": False,
    "required": ["cone_rays", "star_ray", "max_deg", "identified", "failure",
                 "extra_row", "verdicts", "pieces", "point_class",
                 "conclusion"],
    "properties": {
        "cone_rays": MATRIX,
        "star_ray": INT_VEC,
        "max_deg": {"type": "integer", "minimum": 0},
        "identified": {"type": "boolean"},
        "failure": {"type": ["string", "null"]},
        "extra_row": {"type": ["array", "null"],
                      "items": {"type": "integer"}},
        "verdicts": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["degree", "iso"],
                "properties": {
                    "degree": {"type": "integer", "minimum": 0},
                    "iso": {"type": "boolean"},
                },
            },
        },
        "pieces": {"type": "array", "items": _PIECE},
        "point_class": {"type": "string"},
        "conclusion": {"type": "boolean"},
    },
}

VERIFY_K_VANISHING = {
    "type": "object",
    "additionalProperties": False,
    "required": ["cone_rays", "star_ray", "box", "window_rank", "torsion",
                 "stabilized", "matched", "identified", "failure",
                 "conclusion"],
    "properties": {
        "cone_rays": MATRIX,
        "star_ray": INT_VEC,
        "box": {"type": "integer", "minimum": 1},
        "window_rank": {"type": ["integer", "null"], "minimum": 0},
        "torsion": {"type": ["array", "null"],
                    "items": {"type": "integer"}},
        "stabilized": {"type": "boolean"},
        "matched": {"type": ["boolean", "null"]},
        "identified": {"type": "boolean"},
        "failure": {"type": ["string", "null"]},
        "conclusion": {"type": "boolean"},
    },
}

STRONGNESS = {
    "type": "object",
    "additionalProperties": False,
    "required": ["divisor_ray", "bound", "charts", "strong", "power_lcm"],
    "properties": {
        "divisor_ray": {"type": "integer", "minimum": 0},
        "bound": {"type": "integer", "minimum": 1},
        "charts": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["max_cone", "invertible", "in_span",
                             "min_power"],
                "properties": {
                    "max_cone": INT_VEC,
                    "invertible": INT_VEC,
                    "in_span": {"type": "boolean"},
                    "min_power": {"type": ["integer", "null"], "minimum": 1},
                },
            },
        },
        "strong": {"type": "boolean"},
        "power_lcm": {"type": ["integer", "null"], "minimum": 1},
    },
}

VERB_SCHEMAS = {
    "validate": VALIDATE,
    "subdivide": SUBDIVIDE,
    "cox": COX,
    "chow-stack": CHOW_STACK,
    "chow-groups": CHOW_GROUPS,
    "ktheory-stack": KTHEORY_STACK,
    "verify-vanishing": VERIFY_VANISHING,
    "verify-k-vanishing": VERIFY_K_VANISHING,
    "strongness": STRONGNESS,
}
