import pandas as pd

from apps.cli.base import RecalCommand
from apps.cli.dataset import ingest, read_table
from apps.core.exceptions import InputError
from apps.harness.detrend import detrend_training
from apps.harness.recalibrators import fit_recalibrator

PERCENTILES = (1, 25, 50, 75, 99)


class Command(RecalCommand):
    help = (
        "Fit a recalibrator on --data and write predictive percentiles, mean and "
        "variance for every row of --targets."
    )

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_data_arguments(parser)
        self.add_model_arguments(parser)
        parser.add_argument("--targets", required=True, help="rows to forecast; obs may be blank")

    def run(self, **options):
        dataset = ingest(options["data"], options["fmt"])
        targets = read_table(options["targets"], options["fmt"], require_obs=False)
        train = dataset.training
        if options["detrend"]:
            if dataset.dated or targets.dated:
                raise InputError("detrended prediction needs integer time indices in both files")
            train, m_trend, y_trend = detrend_training(train)
        fitted = fit_recalibrator(options["recalibrator"], train, self.fit_options(options))

        rows = []
        for time, t, m, v in zip(targets.times, targets.t, targets.m, targets.v):
            if options["detrend"]:
                forecast = fitted.predict(m - m_trend(t), v).shift(float(y_trend(t)))
            else:
                forecast = fitted.predict(m, v)
            row = {"time": time, "ens_mean": m, "ens_var": v}
            row["mean"] = forecast.mean()
            row["variance"] = forecast.variance()
            for percentile in PERCENTILES:
                row[f"q{percentile:02d}"] = float(forecast.quantile(percentile / 100))
            rows.append(row)

        path = self.write_table("predictions.csv", self.echo(options), pd.DataFrame(rows))
        self.done(f"wrote {path}")
