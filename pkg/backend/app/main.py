from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .api.routes import router
from .config import configure_logging, get_settings
from .errors import ConfigurationError, FpmError

settings = get_settings()
configure_logging(settings.log_level)

app = FastAPI(title=settings.app_name)
app.include_router(router)


@app.exception_handler(ConfigurationError)
def configuration_error(request: Request, exc: ConfigurationError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc), "error": type(exc).__name__})


@app.exception_handler(FpmError)
def solver_error(request: Request, exc: FpmError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc), "error": type(exc).__name__})


@app.get("/health")
def health_check() -> dict[str, str]:
    return {"status": "ok"}
