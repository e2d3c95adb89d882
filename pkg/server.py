#python -m uvicorn server:api --reload
from fastapi import FastAPI, Request
from api.routes.kernels import router as kernels_router
from api.routes.solver import router as solver_router
from api.routes.experiment import router as experiment_router
import uvicorn
import time
import logging
from config import API_HOST, API_PORT
from core.log_config import setup_logging

setup_logging()
logger = logging.getLogger(__name__)

api = FastAPI(
    title="Volterra Kernel Calculus API",
    description="Array-kernel property checks and structure-preserving Volterra solves on nonuniform meshes",
    version="1.0.0",
)

# Include routers
api.include_router(kernels_router)
api.include_router(solver_router)
api.include_router(experiment_router)


# Request logging middleware
@api.middleware("http")
async def log_requests(request: Request, call_next):
    start_time = time.time()
    response = await call_next(request)
    process_time = time.time() - start_time
    logger.info(f"{request.method} {request.url.path} - {response.status_code} - {process_time:.4f}s")
    return response


@api.get("/")
def index():
    return {
        "app": "Volterra Kernel Calculus API",
        "version": "1.0.0",
        "status": "running"
    }


if __name__ == "__main__":
    uvicorn.run(
        "server:api",
        host=API_HOST,
        port=API_PORT,
        reload=True,
    )
