"""Typer application with async commands and per-exception error handlers.

Adaptation of the snippet/code from:
- https://github.com/tiangolo/typer/issues/88#issuecomment-1613013597
- https://github.com/argilla-io/argilla/blob/e77ca86c629a492019f230ac55ebde207b280xc9c/src/argilla/cli/typer_ext.py
"""

#  Copyright 2021-present, the Recognai S.L. team.
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.

from __future__ import annotations

import asyncio
import inspect
from collections.abc import Callable
from functools import wraps
from typing import Any, ParamSpec, TypeVar

from typer import Typer as SyncTyper

_P = ParamSpec("_P")
_R = TypeVar("_R")

HandleErrorFunc = Callable[[Any], None]


class AsyncTyper(SyncTyper):
    """A Typer subclass that runs async commands and routes errors to handlers.

    Handlers are looked up along the exception's MRO, so a handler
    registered for a base class catches every subclass without its own.
    Click's usage errors are never routed and keep their exit code 2.
    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        """Initialize the app with an empty handler registry."""
        super().__init__(*args, **kwargs)
        self.error_handlers: dict[type[Exception], HandleErrorFunc] = {}

    def handler_for(self, error: Exception) -> HandleErrorFunc | None:
        """Return the handler of the closest registered base class, if any."""
        for klass in type(error).__mro__:
            if (handler := self.error_handlers.get(klass)) is not None:
                return handler
        return None

    def _wrap(self, func: Callable[_P, Any]) -> Callable[_P, Any]:
        """Return a sync callable that runs func and dispatches its errors."""

        @wraps(func)
        def run(*args: _P.args, **kwargs: _P.kwargs) -> Any:
            try:
                if inspect.iscoroutinefunction(func):
                    return asyncio.run(func(*args, **kwargs))
                return func(*args, **kwargs)
            except Exception as err:
                if (handler := self.handler_for(err)) is None:
                    raise
                return handler(err)

        return run

    def command(  # type: ignore[override]
        self, name: str | None = None, **kwargs: Any
    ) -> Callable[[Callable[_P, _R]], Callable[_P, _R]]:
        """Create a new typer command; the command may be a coroutine function."""
        super_command = super().command(name, **kwargs)

        def decorator(func: Callable[_P, _R]) -> Callable[_P, _R]:
            super_command(self._wrap(func))
            return func

        return decorator

    def error_handler(
        self, exc: type[Exception]
    ) -> Callable[[HandleErrorFunc], HandleErrorFunc]:
        """Register an error handler for an exception class and its subclasses."""

        def decorator(func: HandleErrorFunc) -> HandleErrorFunc:
            self.error_handlers[exc] = func
            return func

        return decorator
