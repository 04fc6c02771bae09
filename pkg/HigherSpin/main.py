import argparse
import logging
import sys
from itertools import product
from typing import List, Optional, Sequence

from .geometry import QuadratureRule
from .harness import (CHECKS, DEFAULT_PAIRS, HarnessError, ModuleErrors, Perturbation, RunConfig, exit_code,
                      run_all, write_reports)
from .kernels import build_kernel
from .spaces import basis, gram_table, reproducing_kernel
from .viz import diagram

logger = logging.getLogger('HigherSpin')


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='hsl', description='Verification of higher spin Dirac operator identities.')
    parser.add_argument('--verbose', '-v', action='count', default=0)
    commands = parser.add_subparsers(dest='command', required=True)

    verify = commands.add_parser('verify', help='run checks and write a JSON-lines report')
    verify.add_argument('check', choices=CHECKS + ('all',))
    verify.add_argument('--m', type=int, nargs='*', default=None, help='dimensions; crossed with --k')
    verify.add_argument('--k', type=int, nargs='*', default=None, help='degrees in u; crossed with --m')
    verify.add_argument('--xdeg', type=int, default=2)
    verify.add_argument('--mode', choices=('exact', 'float'), default='exact')
    verify.add_argument('--tol', type=float, default=1e-8)
    verify.add_argument('--quad-degree', type=int, default=20)
    verify.add_argument('--seed', type=int, default=0)
    verify.add_argument('--out', default='report.jsonl')
    verify.add_argument('--jobs', type=int, default=1)
    verify.add_argument('--perturb', default=None, help="negative control, e.g. 'a_k' or 'omega:101/100'")

    dump = commands.add_parser('dump', help='print bases, kernels or quadrature tables')
    dump.add_argument('what', choices=('basis', 'kernel', 'quadrature'))
    dump.add_argument('--m', type=int, required=True)
    dump.add_argument('--k', type=int, default=1)
    dump.add_argument('--kind', default=None, help='Hk|Mk|uMk1 for bases, Ek|Fk|Hk|Z1|Z2 for kernels')
    dump.add_argument('--mode', choices=('exact', 'float'), default='float')
    dump.add_argument('--quad-degree', type=int, default=20)
    dump.add_argument('--pretty', action='store_true', help='unicode rendering of bases and kernels')

    graph = commands.add_parser('diagram', help='Graphviz source of the operator diagram')
    graph.add_argument('--m', type=int, required=True)
    graph.add_argument('--k', type=int, default=1)
    graph.add_argument('--out', default=None)
    graph.add_argument('--view', action='store_true')
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.m is None and args.k is None:
        pairs = DEFAULT_PAIRS
    else:
        ms = args.m if args.m is not None else sorted({m for m, _ in DEFAULT_PAIRS})
        ks = args.k if args.k is not None else [1]
        pairs = tuple(product(ms, ks))
    checks = CHECKS if args.check == 'all' else (args.check,)
    if args.check == 'all' and args.xdeg < 2:
        checks = tuple(c for c in CHECKS if c != 'decomposition')
    return RunConfig(pairs=pairs, xdeg=args.xdeg, mode=args.mode, tol=args.tol, quad_degree=args.quad_degree,
                     seed=args.seed, out=args.out, jobs=args.jobs,
                     perturbation=None if args.perturb is None else Perturbation.parse(args.perturb), checks=checks)


def verify(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    reports = run_all(cfg)
    target = write_reports(reports, cfg.out)
    failed = [r for r in reports if r.status == 'fail']
    print(f'{len(reports)} checks, {len(failed)} failed; report in {cfg.out}, summary in {target}')
    for r in failed:
        print(f'  FAIL {r.check} (m={r.m}, k={r.k}): residual {r.residual:.3g}')
    return exit_code(reports)


def dump(args: argparse.Namespace) -> int:
    if args.what == 'basis':
        space = basis(args.m, args.k, args.kind or 'Mk')
        print(f'{space.kind} for m={space.m}, k={space.k}: module rank {space.module_rank}, '
              f'real dimension {space.dimension}')
        for element in space.elements:
            print(element.pretty() if args.pretty else element)
        print('gram:')
        print(gram_table(space))
    elif args.what == 'kernel':
        kind = args.kind or 'Ek'
        if kind in ('Z1', 'Z2'):
            kernel = reproducing_kernel(args.m, args.k, kind).kernel
            print(kernel.pretty() if args.pretty else kernel)
        else:
            sol = build_kernel(args.m, args.k, kind)
            print(sol.value.pretty() if args.pretty else sol)
    else:
        rule = QuadratureRule(args.m, 'exact_polynomial' if args.mode == 'exact' else 'product_gauss',
                              args.quad_degree)
        print(rule.export())
    return 0


def draw(args: argparse.Namespace) -> int:
    graph = diagram(args.m, args.k, view=args.view)
    if args.out is None:
        print(graph.source)
    else:
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(graph.source)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    levels: List[int] = [logging.WARNING, logging.INFO, logging.DEBUG]
    logging.basicConfig(level=levels[min(args.verbose, 2)], format='%(levelname)s %(name)s: %(message)s')
    commands = {'verify': verify, 'dump': dump, 'diagram': draw}
    try:
        return commands[args.command](args)
    except ModuleErrors as error:
        logger.error(error.message)
        return 1 if isinstance(error, HarnessError) else 2


if __name__ == '__main__':
    sys.exit(main())
