from apps.cli.base import RecalCommand
from apps.cli.dataset import ingest
from apps.harness.detrend import detrend_training
from apps.harness.recalibrators import fit_recalibrator


class Command(RecalCommand):
    help = "Fit a recalibrator on a dataset and write its parameters as key: value lines."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_data_arguments(parser)
        self.add_model_arguments(parser)

    def run(self, **options):
        train = ingest(options["data"], options["fmt"]).training
        record: dict[str, object] = {"recalibrator": options["recalibrator"], "n": train.n}
        if options["detrend"]:
            train, m_trend, y_trend = detrend_training(train)
            record.update(
                {
                    "m_trend_intercept": m_trend.intercept,
                    "m_trend_slope": m_trend.slope,
                    "y_trend_intercept": y_trend.intercept,
                    "y_trend_slope": y_trend.slope,
                }
            )
        fitted = fit_recalibrator(options["recalibrator"], train, self.fit_options(options))
        record.update(fitted.parameters())
        path = self.write_record(f"fit_{fitted.name}.txt", self.echo(options), record)
        self.done(f"wrote {path}")
