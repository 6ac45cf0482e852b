# clustering/forms.py
from django import forms

from clustering.metric import Metric
from portfolio.forms import bound_cleaned_data


class MetricForm(forms.Form):
    """{"type": "metric", "dist": [[...], ...], "allowed": [...]} with allowed optional."""

    type = forms.CharField()
    dist = forms.JSONField(required=True)
    allowed = forms.JSONField(required=False)

    def clean_type(self):
        kind = self.cleaned_data.get('type')
        if kind != "metric":
            raise forms.ValidationError(f"expected type 'metric', got {kind!r}")
        return kind

    def clean_dist(self):
        dist = self.cleaned_data.get('dist')
        if not isinstance(dist, list) or not dist or not all(isinstance(row, list) for row in dist):
            raise forms.ValidationError("dist must be a nonempty list of rows")
        return dist

    def clean_allowed(self):
        allowed = self.cleaned_data.get('allowed')
        if allowed in (None, ''):
            return None
        if not isinstance(allowed, list) or not all(
            isinstance(i, int) and not isinstance(i, bool) for i in allowed
        ):
            raise forms.ValidationError("allowed must be a list of point indices")
        return allowed

    def clean(self):
        cleaned = super().clean()
        if not self.errors:
            cleaned['metric'] = Metric(cleaned['dist'], cleaned.get('allowed'))
        return cleaned


def metric_from_json(data):
    return bound_cleaned_data(MetricForm, data)['metric']
