import pandas as pd
from django.conf import settings

from apps.cli.base import RecalCommand, parse_levels
from apps.cli.dataset import ingest
from apps.harness.crossval import LEAVE_ONE_OUT, ROLLING, CvPlan, run_cv
from apps.harness.summary import aggregate


class Command(RecalCommand):
    help = (
        "Cross-validate a recalibrator and write per-forecast scores, the summary "
        "and the PIT histogram."
    )

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_data_arguments(parser)
        self.add_model_arguments(parser)
        parser.add_argument("--window", type=int, default=25, help="rolling training window")
        parser.add_argument("--loo", action="store_true", help="leave-one-out instead of rolling")
        parser.add_argument("--levels", default=None, help="coverage levels, e.g. 0.5,0.9")

    def run(self, **options):
        levels = (
            parse_levels(options["levels"])
            if options["levels"]
            else list(settings.RECAL_COVERAGE_LEVELS)
        )
        fit_options = self.fit_options(options)
        plan = CvPlan(
            LEAVE_ONE_OUT if options["loo"] else ROLLING,
            options["recalibrator"],
            window=None if options["loo"] else options["window"],
            base_seed=self.seed,
            k=fit_options.bootstrap_k,
            detrend=options["detrend"],
        )
        dataset = ingest(options["data"], options["fmt"])
        run = run_cv(dataset.training, plan, fit_options)
        summary = aggregate(run, levels=levels)

        echo = self.echo(options, **plan.echo(), levels=",".join(f"{x:g}" for x in levels))
        records = pd.DataFrame(
            {
                "time": [dataset.times[fold.index] for fold in run],
                "obs": [fold.y for fold in run],
                "pit": [fold.record.pit for fold in run],
                "ignorance_bits": [fold.record.ignorance_bits for fold in run],
                "crps": [fold.record.crps for fold in run],
            }
        )
        histogram = summary.pit_histogram
        bins = pd.DataFrame(
            {
                "bin_lower": histogram.bin_edges[:-1],
                "bin_upper": histogram.bin_edges[1:],
                "count": histogram.counts,
            }
        )
        record = summary.as_record()
        record["failed_times"] = ",".join(dataset.times[f.index] for f in run.failures) or "-"
        self.write_table("records.csv", echo, records)
        self.write_table("pit_histogram.csv", echo, bins)
        path = self.write_record("summary.txt", echo, record)
        self.done(
            f"wrote {path}: {summary.fold_count} folds, mean ignorance "
            f"{summary.mean_ignorance:.4f} bits, mean CRPS {summary.mean_crps:.4f}"
        )
