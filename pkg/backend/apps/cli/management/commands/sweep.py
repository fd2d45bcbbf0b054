import pandas as pd

from apps.cli.base import RecalCommand, parse_names, parse_windows
from apps.cli.dataset import ingest
from apps.harness.experiments import training_size_sweep


class Command(RecalCommand):
    help = "Score recalibrators with rolling windows of several sizes."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_data_arguments(parser)
        parser.add_argument("--windows", default="30,50,100,400")
        parser.add_argument("--recalibrators", default="ngr-plugin,ngr-bootstrap")
        parser.add_argument("--detrend", action="store_true")
        parser.add_argument("--bootstrap-k", type=int, default=None, dest="bootstrap_k")

    def run(self, **options):
        windows = parse_windows(options["windows"])
        names = parse_names(options["recalibrators"])
        fit_options = self.fit_options(options)
        data = ingest(options["data"], options["fmt"]).training
        rows = training_size_sweep(
            data,
            windows,
            names,
            self.seed,
            k=fit_options.bootstrap_k,
            detrend=options["detrend"],
            options=fit_options,
        )
        frame = pd.DataFrame([row.__dict__ for row in rows])
        echo = self.echo(
            options,
            windows=",".join(map(str, windows)),
            recalibrators=",".join(names),
            bootstrap_k=fit_options.bootstrap_k,
        )
        path = self.write_table("sweep.csv", echo, frame)
        self.done(f"wrote {path}")
