import json
import logging

from core.bitstream import payload_bit_widths, header_for, read_stream, write_stream
from core.estimator import encode_observation, quantized_decode
from utils.command_router import CommandRouter, arg, rate_arg
from utils.vector_io import read_vector, write_vector
from validation.model_params import ModelParams

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["Coding"])


@router.command("encode", help="Quantize an observation vector into a .qgsm stream", arguments=[
    arg("--in", dest="input", required=True, help="Vector file, whitespace separated reals"),
    arg("--sigma2", type=float, required=True),
    arg("--c2", type=float, required=True),
    arg("--rate", type=rate_arg, required=True, help='Bits per coordinate, e.g. "1/2" or 0.5'),
    arg("--seed", type=int, default=0, help="Codebook seed (u64)"),
    arg("--out", required=True, help="Output .qgsm path"),
    arg("--workers", type=int, default=None, help="Search processes (default from settings)"),
])
def encode(args) -> int:
    """Encode X and print a JSON line with the indices, bit counts and achieved inner product."""
    x = read_vector(args.input)
    params = ModelParams(n=x.shape[0], rate_b=args.rate, sigma2=args.sigma2, c2=args.c2)
    header = header_for(params, args.seed)
    idx, inner = encode_observation(x, params, header.seed, workers=args.workers)
    payload_bits = write_stream(args.out, header, idx)
    mag_bits, dir_bits = payload_bit_widths(params.n, params.rate_b, params.c2)
    print(json.dumps({
        "n": params.n,
        "mag_index": idx.mag_index,
        "dir_index": idx.dir_index,
        "mag_bits": mag_bits,
        "dir_bits": dir_bits,
        "payload_bits": payload_bits,
        "inner": inner,
        "out": str(args.out),
    }))
    return 0


@router.command("decode", help="Reconstruct the estimate from a .qgsm stream", arguments=[
    arg("--in", dest="input", required=True, help="Input .qgsm path"),
    arg("--out", required=True, help="Vector file, one coordinate per line"),
])
def decode(args) -> int:
    header, idx = read_stream(args.input)
    estimate = quantized_decode(idx, header.params())
    write_vector(args.out, estimate)
    logger.info(f"Decoded {args.input} into {header.n} coordinates")
    return 0
