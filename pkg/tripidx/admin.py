"""tripidx command line.

    tripidx_admin import   --gtfs DIR --period 2017-05-01:7 --out offer.txt
    tripidx_admin generate --offer offer.txt --trips 50000 --seed 42 --out trips.txt
    tripidx_admin build    --offer offer.txt --trips trips.txt --index ttctr --tpsi 128 --out trips.ttctr
    tripidx_admin query    --offer offer.txt --index trips.ttctr --start S3 --end S12
    tripidx_admin bench    --offer offer.txt --trips trips.txt --tpsi 32,128,512 --out bench.csv
    tripidx_admin verify   --seed 42 --trips 50000
    tripidx_admin sizes    --offer offer.txt --trips trips.txt

Exit codes: 0 ok, 1 usage, 2 data error, 3 verification mismatch.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import os
import sys
import argparse
import logging
from typing import List, Optional, Any, Tuple

import orjson
from pydantic import ValidationError

from tripidx import dt
from tripidx.config import Settings, BuildConfig, load_settings, override
from tripidx.exceptions import DataError, VerificationError, UnknownStopError, IndexFormatError
from tripidx.offer import NetworkOffer, read_offer, write_offer, offer_checksum, offer_sizes, synthetic_network
from tripidx.trips import UserTrip, read_trips, write_trips
from tripidx.tripgen import generate_trips
from tripidx.gtfs import import_gtfs
from tripidx.fixtures import example_offer, example_trips
from tripidx.ttctr import TripCountQuery, CONTAINER_MAGIC as TTCTR_MAGIC, build_ttctr, save_ttctr, load_ttctr, \
    ttctr_sizes
from tripidx.acumm import CONTAINER_MAGIC as ACUMM_MAGIC, build_matrices, save_acumm, load_acumm, acumm_sizes, \
    day_rows
from tripidx.bench import run_bench
from tripidx.verify import verify_all


LOGGER_NAME = 'tripidx.admin-'
log = logging.getLogger(LOGGER_NAME)


COMMANDS = ('import', 'generate', 'build', 'query', 'bench', 'verify', 'sizes')
QUERY_KINDS = ('trips', 'list', 'boardings', 'journey', 'window', 'alightings', 'load', 'average')


class UsageError(Exception): pass


class ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage, which is our data error code."""
    def error(self, message: str):
        raise UsageError(message)


def _int_list(value: str) -> List[int]:
    return [int(v) for v in value.split(',') if v]

def _sampling_list(value: str) -> List[Optional[int]]:
    return [None if v in ('plain', 'none', '0') else int(v) for v in value.split(',') if v]

def _range(value: str) -> Tuple[int, int]:
    lo, _, hi = value.partition(':')
    return int(lo), int(hi or lo)

def get_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='tripidx_admin', description=__doc__,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("cmd", type=str, choices=COMMANDS, help="Command to run")
    parser.add_argument("--config", type=str, help="JSON settings file (network, generator, build, bench)")
    parser.add_argument("-v", "--verbose", action='store_true', help="Debug logging")
    parser.add_argument("--offer", type=str, help="Offer file")
    parser.add_argument("--trips", type=str,
                        help="Trips file; for generate and verify a number of trips to generate")
    parser.add_argument("--index", type=str,
                        help="build: ttctr or acumm; query: index file")
    parser.add_argument("--out", type=str, help="Output file")
    parser.add_argument("--seed", type=int, help="Generator seed")
    parser.add_argument("--period", type=str, help="Analysis period, 2017-05-01:7 or 2017-05-01..2017-05-08")
    # import / generate
    parser.add_argument("--gtfs", type=str, help="GTFS directory")
    parser.add_argument("--network-out", type=str, help="generate: also write the synthetic (or example) offer here")
    parser.add_argument("--example", action='store_true', help="generate: emit the two line worked example")
    parser.add_argument("--workers", type=int, help="generate: worker processes")
    # build / bench
    parser.add_argument("--tpsi", type=str, help="Psi sampling, a comma list for bench")
    parser.add_argument("--wm-sampling", type=str, help="RRR sampling of the wavelet matrix (plain = no RRR), a comma list for bench")
    parser.add_argument("--encoding", type=str, help="AcumM encoding plain or diff, a comma list for bench")
    parser.add_argument("--capacity", type=int, help="Vehicle capacity checked by the diff encoding")
    parser.add_argument("--queries", type=str, help="bench: comma list of query families")
    parser.add_argument("--count", type=int, help="bench, verify: queries per family")
    parser.add_argument("--warmup", type=int, help="bench: warm up queries")
    parser.add_argument("--readers", type=int, help="bench: concurrent reader threads")
    # query
    parser.add_argument("--kind", type=str, default='trips', choices=QUERY_KINDS, help="query kind")
    parser.add_argument("--start", type=str, help="Start stop (id or label)")
    parser.add_argument("--end", type=str, help="End stop (id or label)")
    parser.add_argument("--start-line", type=int, help="Start line")
    parser.add_argument("--end-line", type=int, help="End line")
    parser.add_argument("--stop", type=str, help="Stop (id or label) for boardings")
    parser.add_argument("--line", type=int, help="Line for AcumM queries and boardings")
    parser.add_argument("--day", type=int, help="0-based day of the period")
    parser.add_argument("--journeys", type=_range, help="Journey range lo:hi")
    parser.add_argument("--positions", type=_range, help="Stop position range lo:hi")
    parser.add_argument("--limit", type=int, default=10, help="list: max trips")
    return parser


def _stop_id(o: NetworkOffer, value: str) -> int:
    if value.isdigit():
        return int(value)
    for st in o.stops:
        if st.label == value:
            return st.stop_id
    raise UnknownStopError(f"No stop labelled {value!r}")

def _need(args: argparse.Namespace, *names: str):
    missing = [n for n in names if getattr(args, n.replace('-', '_')) is None]
    if missing:
        raise UsageError(f"{args.cmd} needs {', '.join('--' + m for m in missing)}")

def _settings(args: argparse.Namespace) -> Settings:
    s = load_settings(args.config)
    gen = override(s.generator, rng_seed=args.seed, workers=args.workers)
    if args.trips is not None and args.trips.isdigit() and not os.path.exists(args.trips):
        gen = override(gen, trip_count=int(args.trips))
    build = s.build
    if args.cmd != 'bench':
        data = build.model_dump()
        data.update({k: v for k, v in dict(t_psi=None if args.tpsi is None else int(args.tpsi),
                                            encoding=args.encoding, capacity=args.capacity).items() if v is not None})
        if args.wm_sampling is not None:
            data['wm_sampling'] = _sampling_list(args.wm_sampling)[0]
        build = BuildConfig.model_validate(data)
    network = s.network
    if args.period is not None:
        t1, t2 = dt.parse_period(args.period)
        network = override(network, period_start=dt.from_epoch(t1).strftime('%Y-%m-%d'), days=(t2 - t1) // dt.DAY)
    return Settings(network=network, generator=gen, build=build, bench=s.bench)

def _load_trips(args: argparse.Namespace) -> List[UserTrip]:
    header, trips = read_trips(args.trips)
    log.debug(f'trips header: {header}')
    return trips


def cmd_import(args: argparse.Namespace, s: Settings) -> NetworkOffer:
    _need(args, 'gtfs', 'period', 'out')
    o = import_gtfs(args.gtfs, dt.parse_period(args.period))
    write_offer(args.out, o)
    print(f'=> Imported {o!r} into {args.out}')
    return o

def cmd_generate(args: argparse.Namespace, s: Settings) -> List[UserTrip]:
    _need(args, 'out')
    if args.example:
        o, trips = example_offer(), example_trips()
    else:
        if args.offer is not None:
            o = read_offer(args.offer)
        elif args.network_out is not None:
            o = synthetic_network(s.network)
        else:
            raise UsageError("generate needs --offer, --network-out or --example")
        trips = generate_trips(o, s.generator)
    if args.network_out is not None:
        write_offer(args.network_out, o)
        print(f'=> Wrote {o!r} to {args.network_out}')
    header = {'seed': s.generator.rng_seed, 'period': (o.t_begin, o.t_end)}
    write_trips(args.out, trips, header)
    print(f'=> Wrote {len(trips)} trips to {args.out}')
    return trips

def cmd_build(args: argparse.Namespace, s: Settings) -> str:
    _need(args, 'offer', 'trips', 'index', 'out')
    o = read_offer(args.offer)
    trips = _load_trips(args)
    if args.index == 'ttctr':
        ix = build_ttctr(o, trips, s.build)
        save_ttctr(ix, args.out)
    elif args.index == 'acumm':
        pairs = build_matrices(o, trips, s.build.encoding, s.build.capacity)
        save_acumm(pairs, args.out, offer_checksum(o))
    else:
        raise UsageError(f"--index must be ttctr or acumm, not {args.index!r}")
    print(f'=> Built {args.index} index of {len(trips)} trips into {args.out} ({os.path.getsize(args.out)} bytes)')
    return args.out

def _index_kind(path: str) -> str:
    with open(path, 'rb') as f:
        head = f.read(8)
    if head.startswith(TTCTR_MAGIC):
        return 'ttctr'
    if head.startswith(ACUMM_MAGIC):
        return 'acumm'
    raise IndexFormatError(f"{path}: not an index file")

def _interval(args: argparse.Namespace, o: NetworkOffer) -> Tuple[Optional[int], Optional[int]]:
    if args.day is None:
        return None, None
    return o.day_interval(args.day)

def cmd_query(args: argparse.Namespace, s: Settings) -> Any:
    _need(args, 'offer', 'index')
    o = read_offer(args.offer)
    kind = _index_kind(args.index)
    t1, t2 = _interval(args, o)
    if kind == 'ttctr':
        ix = load_ttctr(args.index, o)
        if args.kind == 'boardings':
            _need(args, 'stop', 'line', 'day')
            res: Any = ix.count_boardings(_stop_id(o, args.stop), args.line, t1, t2)  # type: ignore
        elif args.kind in ('trips', 'list'):
            q = TripCountQuery(start_stop=None if args.start is None else _stop_id(o, args.start),
                               end_stop=None if args.end is None else _stop_id(o, args.end),
                               start_line=args.start_line, end_line=args.end_line, t1=t1, t2=t2)
            res = ix.count_trips(q) if args.kind == 'trips' else ix.list_matches(q, args.limit)
        else:
            raise UsageError(f"A TTCTR index does not answer {args.kind!r} queries")
    else:
        pairs = load_acumm(args.index, offer_checksum(o))
        _need(args, 'line')
        if args.line not in pairs:
            raise UsageError(f"No line {args.line} in {args.index}")
        m = pairs[args.line]
        if args.kind == 'boardings':
            _need(args, 'stop', 'day')
            rows = day_rows(o, args.line, args.day)
            p = o.stop_position(args.line, _stop_id(o, args.stop))
            res = 0 if rows is None else m.boardings_at_stop(p, rows[0], rows[1])
        elif args.kind == 'journey':
            _need(args, 'journeys')
            res = m.journey_boardings(args.journeys[0])
        elif args.kind in ('window', 'alightings'):
            _need(args, 'journeys', 'positions')
            f = m.window_boardings if args.kind == 'window' else m.window_alightings
            res = f(args.journeys[0], args.journeys[1], args.positions[0], args.positions[1])
        elif args.kind == 'load':
            _need(args, 'journeys', 'positions')
            res = m.load_between_stops(args.journeys[0], args.positions[0])
        elif args.kind == 'average':
            p_lo, p_hi = args.positions or (1, m.cols)
            res = m.average_over_days([day_rows(o, args.line, d) for d in range(o.days)], p_lo, p_hi)
        else:
            raise UsageError(f"An AcumM index does not answer {args.kind!r} queries")
    if isinstance(res, list):
        for t in res:
            print(' '.join(f'({a},{b},{c})' for a, b, c in t))
    else:
        print(res)
    return res

def cmd_bench(args: argparse.Namespace, s: Settings):
    _need(args, 'offer', 'trips')
    o = read_offer(args.offer)
    trips = _load_trips(args)
    families = tuple(args.queries.split(',')) if args.queries else None
    cfg = override(s.bench, families=families, queries=args.count, warmup=args.warmup,
                   seed=args.seed, readers=args.readers)
    print(f'=> Common structures: {orjson.dumps(offer_sizes(o)).decode()}')
    report = run_bench(o, trips, cfg,
                       t_psis=_int_list(args.tpsi) if args.tpsi else (s.build.t_psi,),
                       wm_samplings=_sampling_list(args.wm_sampling) if args.wm_sampling else (s.build.wm_sampling,),
                       encodings=args.encoding.split(',') if args.encoding else (s.build.encoding,))
    if args.out:
        report.to_csv(args.out, index=False)
        print(f'=> Wrote {len(report)} rows to {args.out}')
    else:
        print(report.to_csv(index=False), end='')
    return report

def cmd_verify(args: argparse.Namespace, s: Settings):
    generator = None
    if args.offer is not None:
        o = read_offer(args.offer)
    else:
        o = synthetic_network(s.network)
    if args.trips is not None and os.path.exists(args.trips):
        trips = _load_trips(args)
    else:
        trips = generate_trips(o, s.generator)
        generator = s.generator
    print(f'=> Verifying {len(trips)} trips over {o!r}')
    report = verify_all(o, trips, s.build, queries=args.count or 200, seed=s.generator.rng_seed,
                        generator=generator)
    print(f'   {report.total} answers match the oracle: {orjson.dumps(report.checks).decode()}')
    return report

def cmd_sizes(args: argparse.Namespace, s: Settings):
    _need(args, 'offer', 'trips')
    o = read_offer(args.offer)
    trips = _load_trips(args)
    sizes = {
        'common': offer_sizes(o),
        'ttctr': ttctr_sizes(build_ttctr(o, trips, s.build)),
        'acumm_plain': acumm_sizes(build_matrices(o, trips, 'plain')),
        'acumm_diff': acumm_sizes(build_matrices(o, trips, 'diff', s.build.capacity)),
    }
    text = orjson.dumps(sizes, option=orjson.OPT_INDENT_2).decode()
    if args.out:
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(text)
    print(text)
    return sizes


COMMAND_FUNCS = {
    'import': cmd_import,
    'generate': cmd_generate,
    'build': cmd_build,
    'query': cmd_query,
    'bench': cmd_bench,
    'verify': cmd_verify,
    'sizes': cmd_sizes,
}


def run(argv: Optional[List[str]] = None) -> Any:
    """Parse and run one command, exceptions propagate.
    """
    args = get_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(levelname)s %(name)s %(message)s')
    s = _settings(args)
    return COMMAND_FUNCS[args.cmd](args, s)

def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and map failures to the exit codes.
    """
    try:
        run(argv)
    except (UsageError, ValidationError, ValueError, IndexError) as e:
        print(f'E: {e}', file=sys.stderr)
        return 1
    except (DataError, OSError) as e:
        print(f'E: {e}', file=sys.stderr)
        return 2
    except VerificationError as e:
        print(f'E: verification failed: {e}', file=sys.stderr)
        return 3
    return 0
