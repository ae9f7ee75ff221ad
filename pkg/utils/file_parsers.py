"""
File parsing utilities for hypocalc.
Functions to parse system, exact-real and field documents (JSON).
"""
import json
from fractions import Fraction

from .coeffs import SystemSpec, poly_from_terms
from .diophantine import FactorialLiouville, FloatApprox, QuadraticIrrational, Rational
from .errors import SpecError
from .spectral import PartialFourierField
from .validation import validate_exact_real, validate_field_document, validate_system_document


def load_json(f):
    """Read a JSON document from a path or a file-like object.

    Args:
        f: File-like object (e.g., StringIO) or file path string
    """
    try:
        if isinstance(f, str):
            with open(f, 'r') as file:
                return json.load(file)
        f.seek(0)
        return json.load(f)
    except json.JSONDecodeError as e:
        raise SpecError(f"Malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    except OSError as e:
        raise SpecError(f"Cannot read {f}: {e}") from e


def parse_exact_real(doc):
    result = validate_exact_real(doc)
    if not result['valid']:
        raise SpecError(result['message'])
    tag = doc['tag']
    if tag == 'rational':
        return Rational(Fraction(doc['p'], doc.get('q', 1)))
    if tag == 'quad':
        return QuadraticIrrational(Fraction(doc['a']), Fraction(doc['b']), int(doc['d']))
    if tag == 'liouville':
        return FactorialLiouville(int(doc['base']), int(doc['depth']), Fraction(doc.get('offset', 0)))
    return FloatApprox(float(doc['v']))


def parse_system(source):
    """Build a SystemSpec from a dict, a path or a file-like object."""
    doc = source if isinstance(source, dict) else load_json(source)
    result = validate_system_document(doc)
    if not result['valid']:
        raise SpecError(result['message'])
    n = doc['n']
    coefficients = []
    for terms in doc['coefficients']:
        coefficients.append(poly_from_terms(n, [
            (term['freq'], (Fraction(term.get('re', 0)), Fraction(term.get('im', 0)))) for term in terms]))
    constants = tuple(parse_exact_real(c) for c in doc.get('constants', []))
    return SystemSpec(n, tuple(coefficients), constants)


def parse_field(source):
    """Build a PartialFourierField from a snapshot document."""
    doc = source if isinstance(source, dict) else load_json(source)
    result = validate_field_document(doc)
    if not result['valid']:
        raise SpecError(result['message'])
    return PartialFourierField.from_dict(doc)


def parse_alphas(source):
    """A bare list of exact-real documents, or {"alphas": [...]}."""
    doc = source if isinstance(source, (list, dict)) else load_json(source)
    if isinstance(doc, dict):
        if 'alphas' not in doc:
            raise SpecError("Expected a list of exact reals or an object with 'alphas'")
        doc = doc['alphas']
    if not isinstance(doc, list) or not doc:
        raise SpecError("At least one exact real is required")
    return [parse_exact_real(d) for d in doc]
