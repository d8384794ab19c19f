"""Command-line front door.

Every subcommand is a thin client over the HTTP service: it assembles a
request, posts it (in-process by default, or to ``--server URL``), and
renders the response.  Exit codes: 0 = all requested checks passed,
1 = a check failed, 2 = input error.
"""

import asyncio
import json
import sys
from pathlib import Path

import click
import httpx

from .io import format_complex, load_form, parse_complex, to_pairs
from .service import app as service_app


def _fail(message: str, code: int = 2):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        _fail(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        _fail(f"{path} is not valid JSON: {exc}")


def _validation_text(detail) -> str:
    # Pydantic 422 payloads carry a list of {loc, msg, ...} entries.
    if isinstance(detail, list):
        parts = []
        for item in detail:
            loc = ".".join(str(piece) for piece in item.get("loc", ())
                           if piece != "body")
            parts.append(f"{loc}: {item.get('msg', 'invalid')}" if loc
                         else str(item.get("msg", "invalid")))
        return "; ".join(parts)
    return str(detail)


def _post(server: str | None, path: str, payload: dict) -> dict:
    if server:
        try:
            resp = httpx.post(server.rstrip("/") + path, json=payload,
                              timeout=60.0)
        except httpx.HTTPError as exc:
            _fail(f"cannot reach {server}: {exc}")
    else:
        async def _go():
            transport = httpx.ASGITransport(app=service_app)
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://triqal") as client:
                return await client.post(path, json=payload)

        resp = asyncio.run(_go())
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        _fail(_validation_text(detail))
    return resp.json()


def _render_report(doc: dict) -> None:
    click.echo(f"command: {doc['command']}")
    click.echo(f"tol: {doc['tol']:g}")
    width = max(len(name) for name in doc["residuals"])
    for name, value in doc["residuals"].items():
        verdict = "pass" if doc["flags"][name] else "FAIL"
        click.echo(f"  {name:<{width}}  {value:<12.3g}  {verdict}")
    for note in doc["notes"]:
        click.echo(f"note: {note}")
    click.echo("result: ok" if doc["ok"] else "result: FAILED")


def _finish_report(doc: dict, as_json: bool) -> None:
    if as_json:
        click.echo(json.dumps(doc, indent=2))
    else:
        _render_report(doc)
    sys.exit(0 if doc["ok"] else 1)


def _algebra_option(fn):
    fn = click.argument("algebra_file", type=click.Path(exists=True,
                                                        dir_okay=False))(fn)
    return fn


def _common_options(fn):
    fn = click.option("--server", default=None, metavar="URL",
                      help="Send requests to a running service instead of "
                           "evaluating in-process.")(fn)
    fn = click.option("--json", "as_json", is_flag=True,
                      help="Print the raw JSON response.")(fn)
    return fn


def _form_pairs(h_path: str | None):
    if h_path is None:
        return None
    try:
        return to_pairs(load_form(h_path))
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        _fail(f"cannot load form from {h_path}: {exc}")


@click.group()
def main():
    """Verification toolkit for ternary algebras with twisted gluing."""


@main.command()
@_algebra_option
@click.option("--axioms", default=None, metavar="LIST",
              help="Comma-separated checks to run (axiom numerals i..vii "
                   "and/or compatibility, form, pentagon, pachner, cubic, "
                   "projector). Default: all of them.")
@click.option("--h", "h_path", default=None, type=click.Path(exists=True,
                                                             dir_okay=False),
              metavar="FILE", help="Bilinear form JSON; identity if absent.")
@click.option("--tol", type=float, default=None, envvar="TRIQAL_TOL",
              help="Pass/fail tolerance (default 1e-9; TRIQAL_TOL env "
                   "overrides, the flag overrides both).")
@_common_options
def check(algebra_file, axioms, h_path, tol, server, as_json):
    """Run residual checks on an algebra file."""
    payload = {"algebra": _load_json(algebra_file)}
    if axioms:
        payload["checks"] = [token.strip() for token in axioms.split(",")
                             if token.strip()]
    h_pairs = _form_pairs(h_path)
    if h_pairs is not None:
        payload["h"] = h_pairs
    if tol is not None:
        payload["tol"] = tol
    _finish_report(_post(server, "/check", payload), as_json)


@main.command()
@click.option("--d", "d_text", default=None, metavar="COMPLEX",
              help='Family parameter d, e.g. "0.25" or "1+1i".')
@click.option("--alpha", "alpha_text", default=None, metavar="COMPLEX",
              help="Family parameter alpha (nonzero).")
@click.option("--sign", type=click.Choice(["+", "-"]), default="+",
              help="Square-root sign for a and b.")
@click.option("--branch", type=click.Choice(["1", "2"]), default="1",
              help="Solution branch of the quadratic relation.")
@click.option("--trivial", is_flag=True,
              help="Emit the trivial solution instead of a family member.")
@click.option("--out", default=None, type=click.Path(dir_okay=False),
              metavar="FILE", help="Write the algebra file here.")
@_common_options
def family(d_text, alpha_text, sign, branch, trivial, out, server, as_json):
    """Generate a two-dimensional solution of the pentagon equations."""
    payload: dict = {"sign": 1 if sign == "+" else -1, "branch": int(branch)}
    if trivial:
        payload["trivial"] = True
    else:
        if d_text is None or alpha_text is None:
            _fail("either --trivial or both --d and --alpha are required")
        try:
            d = parse_complex(d_text)
            alpha = parse_complex(alpha_text)
        except ValueError as exc:
            _fail(str(exc))
        if d == 0:
            _fail("d must be nonzero")
        if alpha == 0:
            _fail("alpha must be nonzero")
        payload["d"] = [d.real, d.imag]
        payload["alpha"] = [alpha.real, alpha.imag]
    doc = _post(server, "/family", payload)
    if out:
        algebra = {key: value for key, value in doc["algebra"].items()
                   if value is not None}
        Path(out).write_text(json.dumps(algebra, indent=2) + "\n",
                             encoding="utf-8")
    if as_json:
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo(f"command: {doc['command']}")
        for name, pair in doc["vars"].items():
            click.echo(f"  {name} = {format_complex(complex(*pair))}")
        click.echo(f"max system residual: {max(doc['system_residuals']):.3g}")
        click.echo(f"quadratic residual: {doc['quadratic_residual']:.3g}")
        click.echo(f"pentagon residual: {doc['pentagon_residual']:.3g}")
        for note in doc["notes"]:
            click.echo(f"note: {note}")
        if out:
            click.echo(f"wrote {out}")
    sys.exit(0)


@main.command()
@_algebra_option
@click.option("--h", "h_path", default=None, type=click.Path(exists=True,
                                                             dir_okay=False),
              metavar="FILE", help="Bilinear form JSON; identity if absent.")
@click.option("--out", default=None, type=click.Path(dir_okay=False),
              metavar="FILE", help="Write all five tensors here as JSON.")
@_common_options
def full(algebra_file, h_path, out, server, as_json):
    """Build the five operations of the full algebra from m22 and h."""
    payload = {"algebra": _load_json(algebra_file)}
    h_pairs = _form_pairs(h_path)
    if h_pairs is not None:
        payload["h"] = h_pairs
    doc = _post(server, "/full", payload)
    if out:
        tensors = {key: doc[key] for key in ("n", "m22", "m31", "m13",
                                             "m04", "m40")}
        Path(out).write_text(json.dumps(tensors, indent=2) + "\n",
                             encoding="utf-8")
    if as_json:
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo(f"command: {doc['command']}")
        click.echo(f"n: {doc['n']}")
        click.echo("round trips:")
        for name, value in doc["round_trips"].items():
            click.echo(f"  {name:<8}  {value:.3g}")
        for note in doc["notes"]:
            click.echo(f"note: {note}")
        if out:
            click.echo(f"wrote {out}")
    sys.exit(0)


@main.command()
@_algebra_option
@click.option("--tol", type=float, default=None, envvar="TRIQAL_TOL",
              help="Pass/fail tolerance (default 1e-9; TRIQAL_TOL env "
                   "overrides, the flag overrides both).")
@_common_options
def pentagon(algebra_file, tol, server, as_json):
    """Run the raised-identity equivalence suite and projector check."""
    payload = {"algebra": _load_json(algebra_file)}
    if tol is not None:
        payload["tol"] = tol
    _finish_report(_post(server, "/pentagon", payload), as_json)


@main.command()
@click.option("--p", "p", type=int, required=True,
              help="Number of sides of the bipyramid equator (p >= 3).")
@click.option("--q", "q", type=int, required=True,
              help="Gluing twist, coprime to p.")
@_algebra_option
@click.option("--h", "h_path", default=None, type=click.Path(exists=True,
                                                             dir_okay=False),
              metavar="FILE", help="Bilinear form JSON; identity if absent.")
@click.option("--dump-network", "dump_path", default=None,
              type=click.Path(dir_okay=False), metavar="FILE",
              help="Write the face-pairing network as JSON.")
@_common_options
def lens(p, q, algebra_file, h_path, dump_path, server, as_json):
    """Evaluate the closed lens-space contraction network."""
    payload = {"p": p, "q": q, "algebra": _load_json(algebra_file),
               "dump_network": dump_path is not None}
    h_pairs = _form_pairs(h_path)
    if h_pairs is not None:
        payload["h"] = h_pairs
    doc = _post(server, "/lens", payload)
    if dump_path:
        Path(dump_path).write_text(json.dumps(doc["network"], indent=2) + "\n",
                                   encoding="utf-8")
    if as_json:
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo(doc["text"])
        for note in doc["notes"]:
            click.echo(f"note: {note}", err=True)
    sys.exit(0)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run(service_app, host=host, port=port)


if __name__ == "__main__":
    main()
