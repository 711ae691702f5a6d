import logging

logging.getLogger('spinchain').setLevel(logging.DEBUG)
