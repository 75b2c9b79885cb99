"""Django project package for the nonlocal interference experiments."""
