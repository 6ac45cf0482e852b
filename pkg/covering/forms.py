# covering/forms.py
from django import forms

from covering.polyhedron import normalize
from portfolio.forms import bound_cleaned_data


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


class CoveringInstanceForm(forms.Form):
    """{"type": "covering", "A": [[...]], "b": [...]}; b defaults to all ones."""

    type = forms.CharField(required=False)
    A = forms.JSONField(required=True)
    b = forms.JSONField(required=False)

    def clean_type(self):
        kind = self.cleaned_data.get('type')
        if kind and kind != 'covering':
            raise forms.ValidationError(f"expected a covering instance, got type {kind!r}")
        return 'covering'

    def clean_A(self):
        A = self.cleaned_data.get('A')
        if not isinstance(A, list) or not A or not all(isinstance(row, list) and row for row in A):
            raise forms.ValidationError("A must be a nonempty list of nonempty rows")
        if len({len(row) for row in A}) != 1:
            raise forms.ValidationError("rows of A have different lengths")
        if not all(_is_number(v) for row in A for v in row):
            raise forms.ValidationError("entries of A must be numbers")
        return A

    def clean_b(self):
        b = self.cleaned_data.get('b')
        if b in (None, ''):
            return None
        if not isinstance(b, list) or not all(_is_number(v) for v in b):
            raise forms.ValidationError("b must be a list of numbers")
        return b

    def clean(self):
        cleaned = super().clean()
        if not self.errors:
            cleaned['polyhedron'] = normalize(cleaned['A'], cleaned.get('b'))
        return cleaned


def polyhedron_from_json(data):
    return bound_cleaned_data(CoveringInstanceForm, data)['polyhedron']
