from django.db import models

from apps.core.models import BaseModel


class VerificationRun(BaseModel):
    """
    One execution of a verification command.
    """
    MODE_CHOICES = [
        ('verify', 'Verify'),
        ('betti', 'Betti numbers'),
        ('bounds', 'Norm bounds'),
        ('render', 'Render'),
        ('all', 'All suites'),
    ]

    mode = models.CharField(max_length=10, choices=MODE_CHOICES)
    geometry_name = models.CharField(max_length=255, blank=True)
    geometry_hash = models.CharField(max_length=64)
    epsilon = models.CharField(max_length=64)
    degree_cap = models.PositiveIntegerField()
    seed = models.IntegerField(default=0)
    weighted = models.BooleanField(default=False)
    exit_status = models.PositiveSmallIntegerField(default=0)
    report = models.JSONField(default=dict)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.mode} {self.geometry_name or self.geometry_hash[:12]} (exit {self.exit_status})"

    @property
    def passed(self):
        return self.exit_status == 0


class CheckResult(BaseModel):
    """
    A single check recorded in a run report.
    """
    STATUS_CHOICES = [
        ('pass', 'Pass'),
        ('fail', 'Fail'),
        ('error', 'Error'),
    ]

    run = models.ForeignKey(VerificationRun, on_delete=models.CASCADE, related_name='checks')
    position = models.PositiveIntegerField()
    name = models.CharField(max_length=100)
    bigrade = models.CharField(max_length=20, blank=True)
    status = models.CharField(max_length=10, choices=STATUS_CHOICES)
    witness = models.CharField(max_length=255, blank=True)
    values = models.JSONField(default=dict)

    class Meta:
        ordering = ['run', 'position']
        unique_together = ['run', 'position']

    def __str__(self):
        suffix = f" [{self.bigrade}]" if self.bigrade else ""
        return f"{self.name}{suffix}: {self.status}"
