from dataclasses import dataclass

from django import forms
from django.conf import settings

from spectra.exceptions import InvalidArgument
from spectra.fredholm import MIN_NYSTROM_ORDER
from spectra.quadrature import MAX_ORDER

from .registry import (
    COUNT_ENSEMBLES,
    ENSEMBLE_CHOICES,
    REPRODUCIBLE_TABLES,
    SPACING_ENSEMBLES,
    parse_interval,
    parse_real_list,
    resolve_kernel,
)

COMMANDS = ("eigs", "count", "reproduce", "lclt", "spacing")
FORMAT_CHOICES = ("csv", "json", "text")


@dataclass(frozen=True)
class RunConfig:
    command: str
    kernel: str = ""
    ensemble: str = ""
    interval: tuple = None
    s: float = None
    s_values: tuple = ()
    radius: float = None
    k: int = None
    srange: tuple = None
    step: float = None
    table: str = ""
    order: int = None
    truncation: float = 12.0
    log_concavity_floor: float = 1e-14
    output_format: str = "csv"
    out: str = ""
    workers: int = 1


def _choices(values):
    return [("", "")] + [(v, v) for v in values]


class RunConfigForm(forms.Form):
    """Validates the parsed options of one command and builds a RunConfig."""

    kernel = forms.CharField(required=False)
    ensemble = forms.ChoiceField(choices=_choices(ENSEMBLE_CHOICES), required=False)
    interval = forms.CharField(required=False)
    s = forms.CharField(required=False)
    radius = forms.FloatField(required=False)
    k = forms.IntegerField(required=False, min_value=0)
    smax = forms.FloatField(required=False)
    srange = forms.CharField(required=False)
    step = forms.FloatField(required=False)
    table = forms.ChoiceField(choices=_choices(REPRODUCIBLE_TABLES), required=False)
    order = forms.IntegerField(required=False, min_value=MIN_NYSTROM_ORDER, max_value=MAX_ORDER)
    truncation = forms.FloatField(required=False)
    format = forms.ChoiceField(choices=_choices(FORMAT_CHOICES), required=False)
    out = forms.CharField(required=False)
    workers = forms.IntegerField(required=False, min_value=1)

    def __init__(self, command, *args, **kwargs):
        if command not in COMMANDS:
            raise ValueError(f"unknown command {command!r}")
        self.command = command
        super().__init__(*args, **kwargs)

    def _parse(self, parser, field):
        text = self.cleaned_data.get(field)
        if not text:
            return None
        try:
            return parser(text)
        except InvalidArgument as exc:
            raise forms.ValidationError(str(exc)) from None

    def clean_interval(self):
        return self._parse(parse_interval, "interval")

    def clean_srange(self):
        return self._parse(parse_interval, "srange")

    def clean_s(self):
        values = self._parse(parse_real_list, "s")
        return tuple(values) if values else ()

    def clean_kernel(self):
        identifier = self.cleaned_data.get("kernel")
        if not identifier:
            return ""
        try:
            resolve_kernel(identifier)
        except InvalidArgument as exc:
            raise forms.ValidationError(str(exc)) from None
        return identifier

    def clean_radius(self):
        radius = self.cleaned_data.get("radius")
        if radius is not None and not radius > 0:
            raise forms.ValidationError("radius must be positive")
        return radius

    def clean_step(self):
        step = self.cleaned_data.get("step")
        if step is not None and not step > 0:
            raise forms.ValidationError("step must be positive")
        return step

    def clean_truncation(self):
        truncation = self.cleaned_data.get("truncation")
        if truncation is not None and not truncation > 0:
            raise forms.ValidationError("truncation must be positive")
        return truncation

    def clean(self):
        cleaned = super().clean()
        getattr(self, f"_clean_{self.command}")(cleaned)
        fmt = cleaned.get("format")
        if fmt == "text" and self.command != "reproduce":
            self.add_error("format", "text output is only available for reproduce")
        return cleaned

    def _require(self, cleaned, field, message):
        if cleaned.get(field) in (None, "", ()) and field not in self.errors:
            self.add_error(field, message)

    def _clean_eigs(self, cleaned):
        self._require(cleaned, "kernel", "eigs needs --kernel")
        if cleaned.get("kernel") == "ginibre-disk":
            self._require(cleaned, "radius", "ginibre-disk needs --radius")
        elif cleaned.get("kernel"):
            self._require(cleaned, "interval", "eigs needs --interval a:b")

    def _clean_count(self, cleaned):
        kernel, ensemble = cleaned.get("kernel"), cleaned.get("ensemble")
        if bool(kernel) == bool(ensemble):
            if "kernel" not in self.errors and "ensemble" not in self.errors:
                raise forms.ValidationError("count needs exactly one of --kernel or --ensemble")
            return
        if kernel:
            if kernel == "ginibre-disk":
                self._require(cleaned, "radius", "ginibre-disk needs --radius")
            else:
                self._require(cleaned, "interval", "count --kernel needs --interval a:b")
            return
        if ensemble not in COUNT_ENSEMBLES:
            self.add_error("ensemble", f"count takes one of {', '.join(COUNT_ENSEMBLES)}")
        elif ensemble == "ginibre-disk" and cleaned.get("radius") is not None:
            return
        else:
            self._require(cleaned, "s", f"{ensemble} needs --s")
            if len(cleaned.get("s") or ()) > 1:
                self.add_error("s", "count takes a single --s value")

    def _clean_lclt(self, cleaned):
        ensemble = cleaned.get("ensemble")
        if ensemble not in COUNT_ENSEMBLES and "ensemble" not in self.errors:
            self.add_error("ensemble", f"lclt takes one of {', '.join(COUNT_ENSEMBLES)}")
        self._require(cleaned, "s", "lclt needs a non-empty --s list")

    def _clean_spacing(self, cleaned):
        ensemble = cleaned.get("ensemble")
        if ensemble not in SPACING_ENSEMBLES and "ensemble" not in self.errors:
            self.add_error("ensemble", f"spacing takes one of {', '.join(SPACING_ENSEMBLES)}")
        self._require(cleaned, "k", "spacing needs --k")
        if cleaned.get("srange") is None and cleaned.get("smax") is None:
            if "srange" not in self.errors:
                self.add_error("srange", "spacing needs --smax or --srange")
        elif cleaned.get("smax") is not None and not cleaned["smax"] > 0:
            self.add_error("smax", "smax must be positive")

    def _clean_reproduce(self, cleaned):
        self._require(cleaned, "table", f"reproduce takes one of {', '.join(REPRODUCIBLE_TABLES)}")

    def error_text(self):
        """One line per problem, prefixed with the offending option."""
        lines = []
        for field, errors in self.errors.items():
            prefix = "" if field == "__all__" else f"--{field}: "
            lines.extend(prefix + message for message in errors)
        return "\n".join(lines)

    def to_config(self):
        data = self.cleaned_data
        defaults = settings.DPPCOUNT
        s_values = data.get("s") or ()
        srange = data.get("srange")
        if srange is None and data.get("smax") is not None:
            srange = (0.0, data["smax"])
        fmt = data.get("format") or ("text" if self.command == "reproduce" else "csv")
        return RunConfig(
            command=self.command,
            kernel=data.get("kernel") or "",
            ensemble=data.get("ensemble") or "",
            interval=data.get("interval"),
            s=s_values[0] if len(s_values) == 1 else None,
            s_values=tuple(s_values),
            radius=data.get("radius"),
            k=data.get("k"),
            srange=srange,
            step=data.get("step") or defaults["SPACING_STEP"],
            table=data.get("table") or "",
            order=data.get("order"),
            truncation=data.get("truncation") or defaults["TRUNCATION"],
            log_concavity_floor=defaults["LOG_CONCAVITY_FLOOR"],
            output_format=fmt,
            out=data.get("out") or "",
            workers=data.get("workers") or defaults["WORKERS"],
        )
