from .timeit import timeit
