from apps.cli.base import RecalCommand
from apps.cli.dataset import Dataset, emit
from apps.harness.synthetic import GENERATORS, SyntheticSpec, generate_synthetic


class Command(RecalCommand):
    help = "Generate a synthetic forecast archive from the MOS or NGR model."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--generator", choices=GENERATORS, default="mos")
        parser.add_argument("--a", type=float, default=0.0)
        parser.add_argument("--b", type=float, default=1.0)
        parser.add_argument("--c", type=float, default=1.0)
        parser.add_argument("--d", type=float, default=0.0)
        parser.add_argument("--m-mean", type=float, default=0.0, dest="m_mean")
        parser.add_argument("--m-variance", type=float, default=1.0, dest="m_variance")
        parser.add_argument("--v-shift", type=float, default=0.1, dest="v_shift")
        parser.add_argument("--v-scale", type=float, default=1.0, dest="v_scale")
        parser.add_argument("--n", type=int, default=100)
        parser.add_argument("--name", default="synthetic.csv", help="output file name")

    def run(self, **options):
        spec = SyntheticSpec(
            options["generator"],
            options["a"],
            options["b"],
            options["c"],
            options["d"],
            m_mean=options["m_mean"],
            m_variance=options["m_variance"],
            v_shift=options["v_shift"],
            v_scale=options["v_scale"],
            n=options["n"],
            seed=self.seed,
        )
        data = generate_synthetic(spec)
        path = self.out_dir / options["name"]
        self.written.append(path)
        emit(path, Dataset(data, tuple(str(t) for t in data.t)), self.echo(options, **spec.echo()))
        self.done(f"wrote {path}")
