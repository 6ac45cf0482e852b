# portfolio/forms.py
import json

from django import forms

from equinorm.exceptions import ArgumentError
from portfolio.domain import FiniteDomain, Portfolio


class DomainForm(forms.Form):
    """Validates a JSON finite domain: {"vectors": [[...], ...], "labels": [...]}."""

    vectors = forms.JSONField(required=True)
    labels = forms.JSONField(required=False)

    def clean_vectors(self):
        vectors = self.cleaned_data.get('vectors')
        if not isinstance(vectors, list) or not vectors:
            raise forms.ValidationError("vectors must be a nonempty list of lists")
        if not all(isinstance(v, list) for v in vectors):
            raise forms.ValidationError("every vector must be a list of numbers")
        return vectors

    def clean_labels(self):
        labels = self.cleaned_data.get('labels')
        if labels in (None, ''):
            return None
        if not isinstance(labels, list) or not all(isinstance(label, str) for label in labels):
            raise forms.ValidationError("labels must be a list of strings")
        return labels

    def clean(self):
        cleaned = super().clean()
        if not self.errors:
            # ArgumentError is a ValidationError and lands in non_field_errors
            cleaned['domain'] = FiniteDomain(cleaned['vectors'], cleaned.get('labels'))
        return cleaned


class PortfolioForm(forms.Form):
    vectors = forms.JSONField(required=True)
    claimed_alpha = forms.JSONField(required=True)
    provenance = forms.JSONField(required=False)
    details = forms.JSONField(required=False)
    notes = forms.JSONField(required=False)

    def clean_claimed_alpha(self):
        alpha = self.cleaned_data.get('claimed_alpha')
        if isinstance(alpha, bool) or not isinstance(alpha, (int, float, str)):
            raise forms.ValidationError("claimed_alpha must be a number or a string")
        return alpha

    def clean(self):
        cleaned = super().clean()
        if not self.errors:
            cleaned['portfolio'] = Portfolio.from_json({
                "vectors": cleaned['vectors'],
                "claimed_alpha": cleaned['claimed_alpha'],
                "provenance": cleaned.get('provenance') or None,
                "details": cleaned.get('details') or None,
                "notes": cleaned.get('notes') or None,
            })
        return cleaned


def bound_cleaned_data(form_class, data):
    """Run a form over an already parsed JSON object; ArgumentError on failure."""
    if not isinstance(data, dict):
        raise ArgumentError(f"expected a JSON object, got {type(data).__name__}")
    # JSONField takes encoded strings as form data
    fields = form_class.base_fields
    payload = {
        key: json.dumps(value) if isinstance(fields.get(key), forms.JSONField) else value
        for key, value in data.items()
    }
    form = form_class(data=payload)
    if not form.is_valid():
        raise ArgumentError(form.errors.as_text())
    return form.cleaned_data


def domain_from_json(data):
    return bound_cleaned_data(DomainForm, data)['domain']


def portfolio_from_json(data):
    return bound_cleaned_data(PortfolioForm, data)['portfolio']
