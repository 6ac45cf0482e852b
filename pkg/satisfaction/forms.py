# satisfaction/forms.py
from django import forms

from equinorm.exceptions import ArgumentError
from portfolio.forms import bound_cleaned_data
from satisfaction.problems import CompletionTimes, SetCover, Tsp, VertexCover, make_vertex_cover


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _matrix(value, name):
    if not isinstance(value, list) or not value or not all(isinstance(row, list) and row for row in value):
        raise forms.ValidationError(f"{name} must be a nonempty list of nonempty rows")
    if len({len(row) for row in value}) != 1:
        raise forms.ValidationError(f"rows of {name} have different lengths")
    if not all(_is_number(v) for row in value for v in row):
        raise forms.ValidationError(f"entries of {name} must be numbers")
    return value


class CompletionTimesForm(forms.Form):
    """{"type": "completion_times", "p": [[...], ...]}, one row per job."""

    type = forms.CharField()
    p = forms.JSONField(required=True)

    def clean_p(self):
        return _matrix(self.cleaned_data.get('p'), "p")

    def clean(self):
        cleaned = super().clean()
        if not self.errors:
            cleaned['problem'] = CompletionTimes(cleaned['p'])
        return cleaned


class SetCoverForm(forms.Form):
    type = forms.CharField()
    n_elements = forms.IntegerField(min_value=1)
    sets = forms.JSONField(required=True)

    def clean_sets(self):
        sets = self.cleaned_data.get('sets')
        if not isinstance(sets, list) or not sets:
            raise forms.ValidationError("sets must be a nonempty list")
        for members in sets:
            if not isinstance(members, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in members):
                raise forms.ValidationError("every set must be a list of element indices")
        return sets

    def clean(self):
        cleaned = super().clean()
        if not self.errors:
            cleaned['problem'] = SetCover(cleaned['n_elements'], cleaned['sets'])
        return cleaned


class VertexCoverForm(forms.Form):
    type = forms.CharField()
    n_vertices = forms.IntegerField(min_value=2)
    edges = forms.JSONField(required=True)

    def clean_edges(self):
        edges = self.cleaned_data.get('edges')
        if not isinstance(edges, list) or not edges:
            raise forms.ValidationError("edges must be a nonempty list of [u, v] pairs")
        for edge in edges:
            if not (isinstance(edge, list) and len(edge) == 2
                    and all(isinstance(v, int) and not isinstance(v, bool) for v in edge)):
                raise forms.ValidationError("every edge must be a pair of vertex indices")
        return edges

    def clean(self):
        cleaned = super().clean()
        if not self.errors:
            cleaned['problem'] = make_vertex_cover(n_vertices=cleaned['n_vertices'], edges=cleaned['edges'])
        return cleaned


class TspForm(forms.Form):
    type = forms.CharField()
    dist = forms.JSONField(required=True)
    v0 = forms.IntegerField(min_value=0, required=False)

    def clean_dist(self):
        return _matrix(self.cleaned_data.get('dist'), "dist")

    def clean(self):
        cleaned = super().clean()
        if not self.errors:
            v0 = cleaned.get('v0')
            cleaned['problem'] = Tsp(cleaned['dist'], 0 if v0 is None else v0)
        return cleaned


PROBLEM_FORMS = {
    CompletionTimes.kind: CompletionTimesForm,
    SetCover.kind: SetCoverForm,
    VertexCover.kind: VertexCoverForm,
    Tsp.kind: TspForm,
}


def problem_from_json(data):
    kind = data.get("type") if isinstance(data, dict) else None
    if kind not in PROBLEM_FORMS:
        raise ArgumentError(f"unknown satisfaction problem type {kind!r}; choose from {sorted(PROBLEM_FORMS)}")
    return bound_cleaned_data(PROBLEM_FORMS[kind], data)['problem']
