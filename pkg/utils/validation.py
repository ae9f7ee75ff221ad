"""
Validation utilities for hypocalc.
Functions to validate system, exact-real and field documents before parsing.
"""

from fractions import Fraction

EXACT_TAGS = ('rational', 'quad', 'liouville', 'float')


def _is_fraction_text(value):
    if isinstance(value, bool):
        return False
    if isinstance(value, int):
        return True
    if not isinstance(value, str):
        return False
    try:
        Fraction(value)
    except (ValueError, ZeroDivisionError):
        return False
    return True


def validate_exact_real(doc):
    """
    Validate an exact-real document.

    Parameters:
        doc (dict): {"tag": ..., ...}

    Returns:
        dict: Contains 'valid', 'message', 'tag'
    """
    if not isinstance(doc, dict):
        return {'valid': False, 'message': f"Exact real must be an object, got {type(doc).__name__}", 'tag': None}
    tag = doc.get('tag')
    if tag not in EXACT_TAGS:
        return {'valid': False, 'message': f"Unknown exact-real tag '{tag}'; expected one of {', '.join(EXACT_TAGS)}",
                'tag': tag}

    if tag == 'rational':
        p, q = doc.get('p'), doc.get('q', 1)
        if not isinstance(p, int) or not isinstance(q, int) or isinstance(p, bool) or isinstance(q, bool):
            return {'valid': False, 'message': "Rational needs integer 'p' and 'q'", 'tag': tag}
        if q == 0:
            return {'valid': False, 'message': "Rational has zero denominator", 'tag': tag}
    elif tag == 'quad':
        if not all(_is_fraction_text(doc.get(key)) for key in ('a', 'b')):
            return {'valid': False, 'message': "Quadratic irrational needs rationals 'a' and 'b' written as \"p/q\"",
                    'tag': tag}
        d = doc.get('d')
        if not isinstance(d, int) or isinstance(d, bool) or d < 2:
            return {'valid': False, 'message': f"Quadratic irrational needs an integer d >= 2, got {d!r}", 'tag': tag}
        if Fraction(doc['b']) == 0:
            return {'valid': False, 'message': "Quadratic irrational has b = 0", 'tag': tag}
    elif tag == 'liouville':
        base, depth = doc.get('base'), doc.get('depth')
        if not isinstance(base, int) or isinstance(base, bool) or base < 2:
            return {'valid': False, 'message': f"Liouville base must be an integer >= 2, got {base!r}", 'tag': tag}
        if not isinstance(depth, int) or isinstance(depth, bool) or depth < 1:
            return {'valid': False, 'message': f"Liouville depth must be a positive integer, got {depth!r}", 'tag': tag}
        if 'offset' in doc and not _is_fraction_text(doc['offset']):
            return {'valid': False, 'message': "Liouville offset must be a rational \"p/q\"", 'tag': tag}
    else:
        v = doc.get('v')
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            return {'valid': False, 'message': "Float approximation needs a numeric 'v'", 'tag': tag}

    return {'valid': True, 'message': f"Valid {tag} value", 'tag': tag}


def validate_system_document(doc):
    """
    Validate a system document {"n", "coefficients", "constants"}.

    Returns:
        dict: Contains 'valid', 'message', 'n'
    """
    if not isinstance(doc, dict):
        return {'valid': False, 'message': "System document must be a JSON object", 'n': None}
    n = doc.get('n')
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        return {'valid': False, 'message': f"'n' must be a positive integer, got {n!r}", 'n': None}

    coefficients = doc.get('coefficients')
    if not isinstance(coefficients, list) or len(coefficients) != n:
        count = len(coefficients) if isinstance(coefficients, list) else 'no'
        return {'valid': False, 'message': f"Expected {n} coefficient lists, found {count}", 'n': n}
    for j, terms in enumerate(coefficients, start=1):
        if not isinstance(terms, list):
            return {'valid': False, 'message': f"Coefficient a_{j} must be a list of terms", 'n': n}
        for term in terms:
            if not isinstance(term, dict):
                return {'valid': False, 'message': f"Term of a_{j} must be an object", 'n': n}
            freq = term.get('freq')
            if not isinstance(freq, list) or len(freq) != n or \
                    not all(isinstance(k, int) and not isinstance(k, bool) for k in freq):
                return {'valid': False,
                        'message': f"Term of a_{j} has frequency {freq!r}; expected {n} integers", 'n': n}
            for key in ('re', 'im'):
                if key in term and not _is_fraction_text(term[key]):
                    return {'valid': False,
                            'message': f"Term {freq} of a_{j} has non-rational '{key}': {term[key]!r}", 'n': n}

    constants = doc.get('constants', [])
    if not isinstance(constants, list) or (constants and len(constants) != n):
        return {'valid': False, 'message': f"Expected {n} constants or none", 'n': n}
    for j, constant in enumerate(constants, start=1):
        result = validate_exact_real(constant)
        if not result['valid']:
            return {'valid': False, 'message': f"Constant alpha_{j}: {result['message']}", 'n': n}

    return {'valid': True, 'message': f"Valid system with n={n}", 'n': n}


def validate_field_document(doc):
    """
    Validate a partial-Fourier field snapshot.

    Returns:
        dict: Contains 'valid', 'message', 'modes'
    """
    if not isinstance(doc, dict):
        return {'valid': False, 'message': "Field document must be a JSON object", 'modes': 0}
    n = doc.get('n')
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        return {'valid': False, 'message': f"'n' must be a positive integer, got {n!r}", 'modes': 0}
    window = doc.get('xi_window')
    if not isinstance(window, int) or isinstance(window, bool) or window < 1:
        return {'valid': False, 'message': f"'xi_window' must be a positive integer, got {window!r}", 'modes': 0}
    entries = doc.get('xi', [])
    if not isinstance(entries, list):
        return {'valid': False, 'message': "'xi' must be a list of modes", 'modes': 0}

    seen = set()
    for entry in entries:
        xi = entry.get('xi') if isinstance(entry, dict) else None
        if not isinstance(xi, int) or isinstance(xi, bool):
            return {'valid': False, 'message': f"Mode entry without integer 'xi': {entry!r}", 'modes': len(seen)}
        if abs(xi) > window:
            return {'valid': False, 'message': f"Mode xi={xi} lies outside the window {window}", 'modes': len(seen)}
        if xi in seen:
            return {'valid': False, 'message': f"Mode xi={xi} appears twice", 'modes': len(seen)}
        seen.add(xi)
        for c in entry.get('coeffs', []):
            tau = c.get('tau') if isinstance(c, dict) else None
            if not isinstance(tau, list) or len(tau) != n:
                return {'valid': False, 'message': f"Coefficient at xi={xi} has tau {tau!r}; expected {n} integers",
                        'modes': len(seen)}
            if not all(isinstance(c.get(key, 0), (int, float)) for key in ('re', 'im')):
                return {'valid': False, 'message': f"Coefficient at xi={xi}, tau={tau} is not numeric",
                        'modes': len(seen)}

    return {'valid': True, 'message': f"Valid field with {len(seen)} modes", 'modes': len(seen)}
