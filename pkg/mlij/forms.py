# mlij/forms.py
from django import forms

from mlij.instance import MlijInstance
from portfolio.forms import bound_cleaned_data


class MlijInstanceForm(forms.Form):
    """{"type": "mlij", "p": [...], "n": N}"""

    type = forms.CharField(required=False)
    p = forms.JSONField(required=True)
    n = forms.IntegerField(required=True, min_value=1)

    def clean_type(self):
        kind = self.cleaned_data.get('type')
        if kind and kind != 'mlij':
            raise forms.ValidationError(f"expected an mlij instance, got type {kind!r}")
        return 'mlij'

    def clean_p(self):
        p = self.cleaned_data.get('p')
        if not isinstance(p, list) or not p:
            raise forms.ValidationError("p must be a nonempty list of processing times")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in p):
            raise forms.ValidationError("processing times must be numbers")
        return p

    def clean(self):
        cleaned = super().clean()
        if not self.errors:
            cleaned['instance'] = MlijInstance(cleaned['p'], cleaned['n'])
        return cleaned


def instance_from_json(data):
    return bound_cleaned_data(MlijInstanceForm, data)['instance']
